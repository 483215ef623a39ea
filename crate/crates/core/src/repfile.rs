//! JSON exchange format for representations.
//!
//! ```json
//! {"field": "Fp:5", "dim_u": 1, "dim_v": 2, "E": ["1", "0"], "F": ["1", "0", "0", "1"]}
//! ```
//!
//! `E` and `F` are row-major and every scalar is exact text such as `"3"` or
//! `"-2/7"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rep::GammaRep;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub field: String,
    pub dim_u: usize,
    pub dim_v: usize,
    #[serde(rename = "E")]
    pub e: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<String>,
}

fn matrix_from_text(field: Field, rows: usize, cols: usize, entries: &[String], name: &str) -> Result<Matrix> {
    if entries.len() != rows * cols {
        return Err(Error::Shape(format!(
            "{name} has {} entries, expected {rows}x{cols}",
            entries.len()
        )));
    }
    let data = entries
        .iter()
        .map(|t| field.parse_scalar(t))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(field, rows, cols, data)
}

impl RepFile {
    pub fn from_rep(rep: &GammaRep) -> RepFile {
        let text = |m: &Matrix| m.entries().iter().map(|s| s.to_string()).collect();
        RepFile {
            field: rep.field().to_string(),
            dim_u: rep.dim_u(),
            dim_v: rep.dim_v(),
            e: text(rep.e()),
            f: text(rep.f()),
        }
    }

    pub fn field(&self) -> Result<Field> {
        self.field.parse()
    }

    /// Builds and validates the representation; a singular `F` is rejected.
    pub fn to_rep(&self) -> Result<GammaRep> {
        let field = self.field()?;
        let e = matrix_from_text(field, self.dim_u, self.dim_v, &self.e, "E")?;
        let f = matrix_from_text(field, self.dim_v, self.dim_v, &self.f, "F")?;
        GammaRep::new(field, self.dim_u, self.dim_v, e, f)
    }

    pub fn from_json(text: &str) -> Result<RepFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("rep file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Parses a rep file and validates it.
pub fn parse_rep(text: &str) -> Result<GammaRep> {
    RepFile::from_json(text)?.to_rep()
}
