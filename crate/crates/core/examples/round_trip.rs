//! Representations of the Toeplitz graph, the modules they realize, and the
//! round trip back to a representation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toeplitz::algebra::idempotent_f;
use toeplitz::certify::Budget;
use toeplitz::rep::{act_element, act_x, act_y, lf_dim, roundtrip, stats, GammaRep, ModuleVector};
use toeplitz::{Field, Matrix, Result};

fn show(m: &ModuleVector) -> String {
    let s: Vec<String> = m.s_part().iter().map(|((h, k), c)| format!("{c}·y^{h}f_1⊗u{k}")).collect();
    let v: Vec<String> = m.v_part().iter().map(|c| c.to_string()).collect();
    format!("s = [{}], v = ({})", s.join(", "), v.join(", "))
}

fn main() -> Result<()> {
    let f5 = Field::Prime(5);
    let rep = GammaRep::new(
        f5,
        1,
        2,
        Matrix::from_i64(f5, 1, 2, &[1, 0]),
        Matrix::from_i64(f5, 2, 2, &[0, 1, 1, 0]),
    )?;
    println!("rep: {:?}", stats(&rep));
    println!("lf dimension: {}", lf_dim(&rep, &Budget::default())?);

    let m = ModuleVector::new(&rep, [((2, 0), f5.from_i64(3))], vec![f5.one(), f5.from_i64(2)])?;
    let ym = act_y(&rep, &m)?;
    println!("m      : {}", show(&m));
    println!("y m    : {}", show(&ym));
    println!("x(y m) = m: {}", act_x(&rep, &ym)? == m);
    println!("f_1 m  : {}", show(&act_element(&rep, &idempotent_f(f5, 1)?, &m)?));

    let (back, witness) = roundtrip(&rep)?;
    println!("extracted: E = {:?}, F = {:?}", back.e(), back.f());
    println!("isomorphism witness: {witness:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let found = (0..20)
        .filter(|_| {
            let r = GammaRep::random(f5, &mut rng, 4);
            matches!(roundtrip(&r), Ok((_, Some(_))))
        })
        .count();
    println!("random round trips with a witness: {found}/20");
    Ok(())
}
