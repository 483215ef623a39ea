use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    /// A windowed computation did not settle within the doubling budget.
    #[error("no stabilization for {what} after {attempts} window(s)")]
    NonStabilization { what: String, attempts: usize },

    #[error("presentation check failed: {0}")]
    Presentation(String),

    #[error("formula not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
