//! Extensions of `L_p` by `S_1^k` built from classes in `K[T]/(p*(T))`.

use toeplitz::homology::{build_extension, extensions_equivalent, is_split_extension, reversed_polynomial, ExtClassVector};
use toeplitz::rep::iso_witness;
use toeplitz::{Field, Result, XPolynomial};

fn main() -> Result<()> {
    let f2 = Field::Prime(2);
    let p = XPolynomial::from_i64(f2, &[1, 1, 1]);
    println!("p = {p}, p*(T) = {}", reversed_polynomial(&p));

    // all classes for k = 1: the 4 residues of degree < 2
    let classes: Vec<XPolynomial> = (0..4).map(|b| XPolynomial::from_i64(f2, &[b & 1, (b >> 1) & 1])).collect();
    let middles = classes
        .iter()
        .map(|c| build_extension(&p, &ExtClassVector::new(vec![c.clone()])))
        .collect::<Result<Vec<_>>>()?;
    for (c, m) in classes.iter().zip(&middles) {
        println!("class {c}: E = {:?}, split: {}", m.e(), is_split_extension(&p, m)?);
    }
    for i in 0..middles.len() {
        for j in i + 1..middles.len() {
            println!(
                "classes {} and {}: equivalent extensions {}, isomorphic middle terms {}",
                classes[i],
                classes[j],
                extensions_equivalent(&middles[i], &middles[j])?,
                iso_witness(&middles[i], &middles[j])?.is_some()
            );
        }
    }
    Ok(())
}
