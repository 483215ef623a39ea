//! The JSON exchange format for representations.

use toeplitz::homology::build_extension;
use toeplitz::homology::ExtClassVector;
use toeplitz::repfile::{parse_rep, RepFile};
use toeplitz::{Field, Result, XPolynomial};

fn main() -> Result<()> {
    let q = Field::Rationals;
    let p = XPolynomial::from_i64(q, &[-2, 0, 1]);
    let cls = ExtClassVector::new(vec![XPolynomial::from_i64(q, &[1, -1])]);
    let rep = build_extension(&p, &cls)?;
    let text = RepFile::from_rep(&rep).to_json();
    println!("{text}");
    assert_eq!(parse_rep(&text)?, rep);
    match parse_rep(r#"{"field":"Q","dim_u":0,"dim_v":1,"E":[],"F":["0"]}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpected"),
    }
    Ok(())
}
