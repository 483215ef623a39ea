//! Ext¹ dimensions from the closed formulas, checked against the
//! presentation-based oracle.

use toeplitz::certify::Budget;
use toeplitz::cli::parse_module_spec;
use toeplitz::homology::{ext_dim_general, ext_oracle, hom_r_dim, Formula};
use toeplitz::{Field, Result};

fn main() -> Result<()> {
    let field = Field::Prime(5);
    let budget = Budget::default();
    let pairs = [
        ("Lp:x-1", "S1"),
        ("Lp:x^2+x+1", "S1^2"),
        ("S1^2", "Lp:x-1"),
        ("Lp:x^2-1", "Lp:x-1"),
        ("S1", "S1"),
    ];
    for (a, b) in pairs {
        let m = parse_module_spec(a, field)?;
        let n = parse_module_spec(b, field)?;
        let values: Vec<String> = Formula::ALL
            .iter()
            .filter(|f| f.applies(&m, &n))
            .map(|f| Ok(format!("({f}) {}", ext_dim_general(&m, &n, *f, &budget)?)))
            .collect::<Result<_>>()?;
        println!(
            "Ext({a}, {b}): {}; oracle {}; Hom_R {}",
            values.join(", "),
            ext_oracle(&m, &n, &budget)?,
            hom_r_dim(&m, &n, &budget)?
        );
    }
    Ok(())
}
