//! Parsing, normal forms and the basic identities of `R = K⟨x, y⟩/(xy − 1)`.

use toeplitz::algebra::{idempotent_f, p_star};
use toeplitz::parser::{format, parse};
use toeplitz::{AlgebraElement, Field, Result, XPolynomial};

fn main() -> Result<()> {
    let q = Field::Rationals;
    for text in ["x*y", "y*x", "(1 - y*x)^2", "x^3*y^2", "(x + y)^2", "2yx^3 - 1/3"] {
        println!("{text:>14}  ->  {}", format(&parse(text, q)?));
    }

    // f_n are orthogonal idempotents
    let f2 = idempotent_f(q, 2)?;
    let f3 = idempotent_f(q, 3)?;
    println!("f_2 = {f2}, f_2^2 = {}, f_2 f_3 = {}", &f2 * &f2, &f2 * &f3);

    // x^n p*(y) = p(x)
    let p = XPolynomial::from_i64(q, &[2, -1, 0, 1]);
    let star = p_star(&p)?;
    let back = &AlgebraElement::monomial(q, 0, 3) * &star;
    println!("p = {p}, p* = {star}, x^3 p* = {back}");

    match parse("x^-1", q) {
        Err(e) => println!("x^-1 rejected: {e}"),
        Ok(a) => println!("unexpected: {a}"),
    }

    let f5 = Field::Prime(5);
    println!("over F_5: 7*x + 3/2  ->  {}", format(&parse("7*x + 3/2", f5)?));
    Ok(())
}
