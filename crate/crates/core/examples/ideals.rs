//! Canonical forms `H = K[y]L ⊕ Rp(x)` of left ideals and membership.

use toeplitz::certify::Budget;
use toeplitz::ideal::{canonical_form, member};
use toeplitz::parser::parse;
use toeplitz::{Field, Result};

fn main() -> Result<()> {
    let q = Field::Rationals;
    let budget = Budget::default();
    let cases: &[&[&str]] = &[
        &["x^2"],
        &["1 - y*x"],
        &["1 - y*x", "x^2"],
        &["y + 2"],
        &["x - 1", "x^2 - 1"],
        &["x - 1", "x + 1"],
        &["x - y*x^2", "x^3"],
    ];
    for gens in cases {
        let elements = gens.iter().map(|g| parse(g, q)).collect::<Result<Vec<_>>>()?;
        let form = canonical_form(&elements, &budget)?;
        let kind = if form.is_unit() {
            "unit"
        } else if form.is_semisimple() {
            "semisimple"
        } else {
            "proper"
        };
        println!("{gens:?}: {form} ({kind})");
    }

    let gens = [parse("1 - y*x", q)?, parse("x^2", q)?];
    for e in ["x^2", "y*x^3", "1 - y*x", "x", "1"] {
        println!("{e} in R f_1 + R x^2: {}", member(&parse(e, q)?, &gens, &budget)?);
    }
    Ok(())
}
