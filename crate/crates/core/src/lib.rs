//! Exact computer algebra for the Toeplitz–Jacobson algebra `R = K⟨x, y⟩/(xy − 1)`.
//!
//! * [`scalar`] and [`linalg`]: exact arithmetic over `Q` and `F_p`.
//! * [`algebra`], [`poly`], [`parser`]: normal-form elements of `R`.
//! * [`ideal`]: canonical form `H = K[y]L ⊕ Rp(x)` of finitely generated left ideals.
//! * [`rep`]: finite-dimensional representations of the Toeplitz graph and the
//!   finite-length `R`-modules they realize.
//! * [`homology`]: Hom and Ext dimensions, by closed formulas and by a
//!   presentation-based oracle.
//! * [`repfile`]: JSON exchange format for representations.
//! * [`cli`]: the `tjk` command line.

pub mod algebra;
pub mod certify;
pub mod cli;
pub mod error;
pub mod homology;
pub mod ideal;
pub mod linalg;
pub mod parser;
pub mod poly;
pub mod rep;
pub mod repfile;
pub mod scalar;

pub use algebra::{AlgebraElement, Monomial};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use poly::{LaurentPoly, XPolynomial};
pub use scalar::{Field, Scalar};
