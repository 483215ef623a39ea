//! Univariate polynomials in `x` and Laurent polynomials in `X`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// Dense polynomial `α_0 + α_1 x + … + α_d x^d` with `α_d ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPolynomial {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl XPolynomial {
    pub fn zero(field: Field) -> XPolynomial {
        XPolynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> XPolynomial {
        XPolynomial::from_coeffs(field, vec![field.one()])
    }

    /// `x^n`
    pub fn monomial(field: Field, n: usize) -> XPolynomial {
        let mut c = vec![field.zero(); n + 1];
        c[n] = field.one();
        XPolynomial { field, coeffs: c }
    }

    pub fn from_coeffs(field: Field, mut coeffs: Vec<Scalar>) -> XPolynomial {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        XPolynomial { field, coeffs }
    }

    /// Coefficients in ascending degree order.
    pub fn from_i64(field: Field, coeffs: &[i64]) -> XPolynomial {
        XPolynomial::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn monic(&self) -> XPolynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> XPolynomial {
        XPolynomial::from_coeffs(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &XPolynomial) -> XPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        XPolynomial::from_coeffs(
            self.field,
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        )
    }

    pub fn sub(&self, other: &XPolynomial) -> XPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        XPolynomial::from_coeffs(
            self.field,
            (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
        )
    }

    pub fn mul(&self, other: &XPolynomial) -> XPolynomial {
        if self.is_zero() || other.is_zero() {
            return XPolynomial::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        XPolynomial::from_coeffs(self.field, out)
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, divisor: &XPolynomial) -> Result<(XPolynomial, XPolynomial)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidArgument("division by the zero polynomial".into()))?;
        let lead_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            let shift = top - dd;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &(&c * d);
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
        }
        Ok((
            XPolynomial::from_coeffs(self.field, quot),
            XPolynomial::from_coeffs(self.field, rem),
        ))
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(&self, other: &XPolynomial) -> XPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Splits off the largest power of `x`: returns `(a, q)` with `self = x^a q`
    /// and `q(0) ≠ 0`. The zero polynomial maps to `(0, 0)`.
    pub fn strip_x_power(&self) -> (usize, XPolynomial) {
        let a = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (0, self.clone());
        }
        (a, XPolynomial::from_coeffs(self.field, self.coeffs[a..].to_vec()))
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Matrix of multiplication by `x` on `K[x]/(p)` in the basis `1, x, …, x^{d-1}`.
    pub fn companion(&self) -> Result<Matrix> {
        let d = self
            .degree()
            .ok_or_else(|| Error::InvalidArgument("companion of the zero polynomial".into()))?;
        let p = self.monic();
        let mut m = Matrix::zeros(self.field, d, d);
        for i in 1..d {
            m[(i, i - 1)] = self.field.one();
        }
        for i in 0..d {
            m[(i, d - 1)] = -&p.coeffs[i];
        }
        Ok(m)
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Scalar,
    mono: &str,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = if neg { -c } else { c.clone() };
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if mono.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{abs}*{mono}")
    }
}

impl fmt::Display for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            write_term(f, first, c, &mono)?;
            first = false;
        }
        Ok(())
    }
}

/// Finite Laurent polynomial `Σ c_k X^k`, `k ∈ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: Field,
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero(field: Field) -> LaurentPoly {
        LaurentPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i64, c: &Scalar) {
        let e = self.terms.entry(k).or_insert_with(|| self.field.zero());
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(field: Field, it: I) -> LaurentPoly {
        let mut l = LaurentPoly::zero(field);
        for (k, c) in it {
            l.add_term(k, &c);
        }
        l
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a + b, &(ca * cb));
            }
        }
        out
    }

    /// The polynomial `X^{-min} · self`, which has nonzero constant term and
    /// generates the same ideal of `K[X, X^{-1}]`.
    pub fn normalized_polynomial(&self) -> XPolynomial {
        let Some((&lo, _)) = self.terms.first_key_value() else {
            return XPolynomial::zero(self.field);
        };
        let hi = *self.terms.last_key_value().unwrap().0;
        let coeffs = (lo..=hi).map(|k| self.coeff(k)).collect();
        XPolynomial::from_coeffs(self.field, coeffs)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let mono = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            };
            write_term(f, first, c, &mono)?;
            first = false;
        }
        Ok(())
    }
}
