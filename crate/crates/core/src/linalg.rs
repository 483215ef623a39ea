//! Dense exact linear algebra plus an incremental sparse echelon basis.
//!
//! Subspaces are exchanged as matrices whose columns span them. The
//! canonical basis of a subspace is its column-echelon form: leading entries
//! equal to one, pivots strictly increasing, and every pivot row zero in the
//! other columns. Two subspaces are equal exactly when their canonical
//! matrices are equal entry for entry.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Row-major construction from scalars; the length must be `rows * cols`.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(s) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, s.field()));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    /// Builds a matrix from column vectors of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(r, c)] += &prod;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, x) in v.iter().enumerate() {
                let a = &self[(r, c)];
                if !a.is_zero() && !x.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("matrix sum of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("matrix difference of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|a| a * s).collect(),
            ..*self
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Matrix) -> Result<Matrix> {
        self.field.check(other.field)?;
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m[(self.rows + r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        Ok(m)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let d = &factor * &m[(row, c)];
                    m[(r, c)] -= &d;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = self.field.one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && rank(self) == self.rows
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.rref().1.len()
}

/// Columns form a basis of the right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let (red, pivots) = m.rref();
    let field = m.field;
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -&red[(row, free)];
        }
        basis.push(v);
    }
    Matrix::from_columns(field, m.cols, &basis)
}

/// One solution of `m s = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::Shape(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    if let Some(s) = b.iter().find(|s| s.field() != m.field) {
        return Err(Error::FieldMismatch(m.field, s.field()));
    }
    let mut aug = Matrix::zeros(m.field, m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, m.cols)] = b[r].clone();
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut s = vec![m.field.zero(); m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        s[p] = red[(row, m.cols)].clone();
    }
    Ok(Some(s))
}

/// Canonical column-echelon basis of the column span of `m`.
pub fn column_echelon(m: &Matrix) -> Matrix {
    let (red, pivots) = m.transpose().rref();
    let cols: Vec<Vec<Scalar>> = (0..pivots.len()).map(|r| red.row(r)).collect();
    Matrix::from_columns(m.field, m.rows, &cols)
}

/// Canonical basis of `span(a) ∩ span(b)`.
pub fn subspace_intersect(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.field.check(b.field)?;
    if a.rows != b.rows {
        return Err(Error::Shape(format!(
            "ambient dimensions differ: {} vs {}",
            a.rows, b.rows
        )));
    }
    let n = a.rows;
    let mut stacked = Matrix::zeros(a.field, n, a.cols + b.cols);
    for r in 0..n {
        for c in 0..a.cols {
            stacked[(r, c)] = a[(r, c)].clone();
        }
        for c in 0..b.cols {
            stacked[(r, a.cols + c)] = -&b[(r, c)];
        }
    }
    let ker = kernel_basis(&stacked);
    let mut vecs = Vec::new();
    for k in 0..ker.cols {
        let coeffs: Vec<Scalar> = (0..a.cols).map(|i| ker[(i, k)].clone()).collect();
        vecs.push(a.mul_vec(&coeffs)?);
    }
    Ok(column_echelon(&Matrix::from_columns(a.field, n, &vecs)))
}

/// Canonical basis of `span(a) + span(b)`.
pub fn subspace_sum(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.field.check(b.field)?;
    if a.rows != b.rows {
        return Err(Error::Shape("ambient dimensions differ".into()));
    }
    let mut cols = a.columns();
    cols.extend(b.columns());
    Ok(column_echelon(&Matrix::from_columns(a.field, a.rows, &cols)))
}

pub type SparseVec = BTreeMap<usize, Scalar>;

/// `v -= c * w` on sparse vectors, dropping cancelled entries.
pub fn sparse_axpy(v: &mut SparseVec, c: &Scalar, w: &SparseVec) {
    for (k, x) in w {
        let d = c * x;
        match v.get_mut(k) {
            Some(e) => {
                *e -= &d;
                if e.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !d.is_zero() {
                    v.insert(*k, -d);
                }
            }
        }
    }
}

/// Incremental echelon basis of sparse vectors.
///
/// Each stored vector is scaled so that its largest coordinate index (its
/// pivot) carries coefficient one, and pivots are distinct. Consequently the
/// stored vectors with pivot below `limit` span exactly the intersection of
/// the span with the coordinate subspace `{k < limit}`.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: Field,
    pivots: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new(field: Field) -> SparseEchelon {
        SparseEchelon {
            field,
            pivots: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        v.retain(|_, c| !c.is_zero());
        loop {
            let Some((&top, c)) = v.last_key_value() else {
                return false;
            };
            match self.pivots.get(&top) {
                Some(p) => {
                    let c = c.clone();
                    sparse_axpy(&mut v, &c, p);
                }
                None => {
                    let inv = c.inv().expect("nonzero");
                    for e in v.values_mut() {
                        *e *= &inv;
                    }
                    self.pivots.insert(top, v);
                    return true;
                }
            }
        }
    }

    /// Fully reduced remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v: SparseVec = v.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect();
        let Some(&top) = v.keys().next_back() else {
            return v;
        };
        for (k, p) in self.pivots.range(..=top).rev() {
            if let Some(c) = v.get(k).cloned() {
                sparse_axpy(&mut v, &c, p);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Stored basis vectors supported strictly below `limit`.
    pub fn below(&self, limit: usize) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.pivots.range(..limit)
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values()
    }
}
