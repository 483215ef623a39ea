//! Exact linear algebra over `Q` and `F_p`.

use toeplitz::linalg::{kernel_basis, rank, solve, subspace_intersect, subspace_sum};
use toeplitz::{Field, Matrix, Result};

fn main() -> Result<()> {
    let q = Field::Rationals;
    let m = Matrix::from_i64(q, 3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 1, 0, 1, 0]);
    println!("rank {}, kernel {:?}", rank(&m), kernel_basis(&m));
    let b = vec![q.from_i64(1), q.from_i64(2), q.from_i64(3)];
    if let Some(s) = solve(&m, &b)? {
        let text: Vec<String> = s.iter().map(|c| c.to_string()).collect();
        println!("m s = (1, 2, 3) for s = ({})", text.join(", "));
    }
    println!("inverse of [[2, 1], [1, 1]]: {:?}", Matrix::from_i64(q, 2, 2, &[2, 1, 1, 1]).inverse());

    let f5 = Field::Prime(5);
    let a = Matrix::from_i64(f5, 3, 2, &[1, 0, 0, 1, 0, 0]);
    let c = Matrix::from_i64(f5, 3, 2, &[1, 0, 1, 0, 0, 1]);
    println!("F_5: A ∩ C = {:?}", subspace_intersect(&a, &c)?);
    println!("F_5: A + C = {:?}", subspace_sum(&a, &c)?);
    Ok(())
}
