//! Elements of `R = K⟨x, y⟩ / (xy − 1)` in the normal form `Σ c_ij y^i x^j`.
//!
//! The monomials `y^i x^j` are a basis of `R`, so an element is just a sparse
//! coefficient table and equality is table equality. Multiplication only
//! needs the rule `x y → 1`: the product `(y^i x^j)(y^k x^l)` cancels
//! `m = min(j, k)` adjacent `x y` pairs.
//!
//! Arithmetic operators panic when the operands live over different fields;
//! the `try_*` methods report [`Error::FieldMismatch`] instead.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{LaurentPoly, XPolynomial};
use crate::scalar::{Field, Scalar};

/// The basis monomial `y^y x^x`. Ordered by `y` first, then `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub y: usize,
    pub x: usize,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { y: 0, x: 0 };

    pub fn new(y: usize, x: usize) -> Monomial {
        Monomial { y, x }
    }

    /// Diagonal index `x − y`; multiplication adds diagonals.
    pub fn diagonal(&self) -> i64 {
        self.x as i64 - self.y as i64
    }
}

/// `(y^i x^j)(y^k x^l) = y^{i+k−m} x^{j+l−m}` with `m = min(j, k)`.
pub fn mono_mul(a: Monomial, b: Monomial) -> Monomial {
    let m = a.x.min(b.y);
    Monomial {
        y: a.y + b.y - m,
        x: a.x + b.x - m,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: Field) -> AlgebraElement {
        AlgebraElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: Field) -> AlgebraElement {
        AlgebraElement::monomial(field, 0, 0)
    }

    pub fn x(field: Field) -> AlgebraElement {
        AlgebraElement::monomial(field, 0, 1)
    }

    pub fn y(field: Field) -> AlgebraElement {
        AlgebraElement::monomial(field, 1, 0)
    }

    /// `y^i x^j`
    pub fn monomial(field: Field, i: usize, j: usize) -> AlgebraElement {
        AlgebraElement::term(field, Monomial::new(i, j), field.one())
    }

    pub fn term(field: Field, m: Monomial, c: Scalar) -> AlgebraElement {
        let mut e = AlgebraElement::zero(field);
        e.add_term(m, &c);
        e
    }

    pub fn constant(c: Scalar) -> AlgebraElement {
        AlgebraElement::term(c.field(), Monomial::ONE, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(field: Field, it: I) -> AlgebraElement {
        let mut e = AlgebraElement::zero(field);
        for (m, c) in it {
            e.add_term(m, &c);
        }
        e
    }

    /// Convenience constructor from `(i, j, coeff)` triples.
    pub fn from_i64(field: Field, terms: &[(usize, usize, i64)]) -> AlgebraElement {
        AlgebraElement::from_terms(
            field,
            terms.iter().map(|&(i, j, c)| (Monomial::new(i, j), field.from_i64(c))),
        )
    }

    /// The element `p(x) ∈ K[x] ⊂ R`.
    pub fn from_x_polynomial(p: &XPolynomial) -> AlgebraElement {
        AlgebraElement::from_terms(
            p.field(),
            p.coeffs().iter().enumerate().map(|(j, c)| (Monomial::new(0, j), c.clone())),
        )
    }

    /// The element `q(y) ∈ K[y] ⊂ R` for coefficients of `q` in ascending order.
    pub fn from_y_polynomial(q: &XPolynomial) -> AlgebraElement {
        AlgebraElement::from_terms(
            q.field(),
            q.coeffs().iter().enumerate().map(|(i, c)| (Monomial::new(i, 0), c.clone())),
        )
    }

    /// `Some(p)` when the element lies in `K[x]`.
    pub fn as_x_polynomial(&self) -> Option<XPolynomial> {
        if self.terms.keys().any(|m| m.y != 0) {
            return None;
        }
        let deg = self.max_x();
        let coeffs = (0..=deg).map(|j| self.coeff(0, j)).collect();
        Some(XPolynomial::from_coeffs(self.field, coeffs))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `y`-exponent in the support (0 for the zero element).
    pub fn max_y(&self) -> usize {
        self.terms.keys().map(|m| m.y).max().unwrap_or(0)
    }

    /// Largest `x`-exponent in the support (0 for the zero element).
    pub fn max_x(&self) -> usize {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        assert_eq!(c.field(), self.field, "coefficient from another field");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        if s.is_zero() {
            return AlgebraElement::zero(self.field);
        }
        AlgebraElement {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    /// `y^a x^b · self`
    pub fn left_mul_monomial(&self, m: Monomial) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.field);
        for (t, c) in &self.terms {
            out.add_term(mono_mul(m, *t), c);
        }
        out
    }

    /// `self · y^a x^b`
    pub fn right_mul_monomial(&self, m: Monomial) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.field);
        for (t, c) in &self.terms {
            out.add_term(mono_mul(*t, m), c);
        }
        out
    }

    pub fn try_add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.field.check(other.field)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.field.check(other.field)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.field.check(other.field)?;
        Ok(self * other)
    }

    pub fn pow(&self, n: u32) -> AlgebraElement {
        let mut acc = AlgebraElement::one(self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Image under `R → R/I = K[X, X^{-1}]`, `y^i x^j ↦ X^{j−i}`.
    pub fn quotient_to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.field, self.terms.iter().map(|(m, c)| (m.diagonal(), c.clone())))
    }

    /// Membership in the socle `I = ⟨1 − yx⟩`.
    pub fn in_socle(&self) -> bool {
        self.quotient_to_laurent().is_zero()
    }

    /// Random element with coefficients from [`Field::random`], `terms`
    /// draws with exponents up to `max_deg` each.
    pub fn random<R: Rng + ?Sized>(field: Field, rng: &mut R, max_deg: usize, terms: usize) -> AlgebraElement {
        let mut e = AlgebraElement::zero(field);
        for _ in 0..terms {
            let m = Monomial::new(rng.gen_range(0..=max_deg), rng.gen_range(0..=max_deg));
            e.add_term(m, &field.random(rng, 5));
        }
        e
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.field, rhs.field, "algebra elements over different fields");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.field, rhs.field, "algebra elements over different fields");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.field, rhs.field, "algebra elements over different fields");
        let mut out = AlgebraElement::zero(self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(mono_mul(*a, *b), &(ca * cb));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for AlgebraElement {
            type Output = AlgebraElement;
            fn $m(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $m(self, rhs: &AlgebraElement) -> AlgebraElement {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

/// The idempotent `f_n = y^{n−1} x^{n−1} − y^n x^n`, `n ≥ 1`.
pub fn idempotent_f(field: Field, n: usize) -> Result<AlgebraElement> {
    if n == 0 {
        return Err(Error::InvalidArgument("idempotent index must be at least 1".into()));
    }
    Ok(AlgebraElement::from_terms(
        field,
        [
            (Monomial::new(n - 1, n - 1), field.one()),
            (Monomial::new(n, n), -field.one()),
        ],
    ))
}

/// `p*(y) = Σ α_i y^{n−i}` for `p = Σ α_i x^i` of degree `n`; it satisfies
/// `x^n p*(y) = p(x)`.
pub fn p_star(p: &XPolynomial) -> Result<AlgebraElement> {
    let n = p
        .degree()
        .ok_or_else(|| Error::InvalidArgument("p* of the zero polynomial".into()))?;
    Ok(AlgebraElement::from_terms(
        p.field(),
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::new(n - i, 0), c.clone())),
    ))
}

/// `x^{k−1} f_k = x^{k−1} − y x^k`, the `K[x]`-socle generator of `S_k`.
pub fn socle_coordinate(field: Field, k: usize) -> AlgebraElement {
    assert!(k >= 1);
    AlgebraElement::from_terms(
        field,
        [
            (Monomial::new(0, k - 1), field.one()),
            (Monomial::new(1, k), -field.one()),
        ],
    )
}

/// `[x^{k−1} f_k for k = 1..=d]`
pub fn socle_coord_basis(field: Field, d: usize) -> Vec<AlgebraElement> {
    (1..=d).map(|k| socle_coordinate(field, k)).collect()
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn defining_relation() {
        assert_eq!(mono_mul(Monomial::new(0, 1), Monomial::new(1, 0)), Monomial::ONE);
        assert_eq!(mono_mul(Monomial::new(1, 0), Monomial::new(0, 1)), Monomial::new(1, 1));
        // y x^2 · y = y x
        assert_eq!(mono_mul(Monomial::new(1, 2), Monomial::new(1, 0)), Monomial::new(1, 1));
    }

    #[test]
    fn idempotents() {
        let f1 = idempotent_f(q(), 1).unwrap();
        let f2 = idempotent_f(q(), 2).unwrap();
        let yx = AlgebraElement::monomial(q(), 1, 1);
        assert_eq!(&yx * &yx, yx);
        assert_eq!(&f1 * &f1, f1);
        assert_eq!(&f1 + &yx, AlgebraElement::one(q()));
        assert!((&f1 * &f2).is_zero());
        assert_eq!(f1, AlgebraElement::from_i64(q(), &[(0, 0, 1), (1, 1, -1)]));
        assert_eq!(f2, AlgebraElement::from_i64(q(), &[(1, 1, 1), (2, 2, -1)]));
        assert!(idempotent_f(q(), 0).is_err());
    }

    #[test]
    fn laurent_images() {
        let f1 = idempotent_f(q(), 1).unwrap();
        assert!(f1.quotient_to_laurent().is_zero());
        let e = AlgebraElement::from_i64(q(), &[(0, 2, 1), (1, 0, 1)]);
        assert_eq!(e.quotient_to_laurent().to_string(), "X^2 + X^-1");
        assert_eq!(AlgebraElement::monomial(q(), 1, 1).quotient_to_laurent().to_string(), "1");
        assert!(idempotent_f(q(), 3).unwrap().in_socle());
        assert!(!AlgebraElement::x(q()).in_socle());
        let d = AlgebraElement::from_i64(q(), &[(2, 2, 1), (1, 1, -1)]);
        assert!(d.in_socle());
        assert_eq!(d, -idempotent_f(q(), 2).unwrap());
    }

    #[test]
    fn p_star_examples() {
        let p = XPolynomial::from_i64(q(), &[1, 3, 1]);
        assert_eq!(
            p_star(&p).unwrap(),
            AlgebraElement::from_i64(q(), &[(2, 0, 1), (1, 0, 3), (0, 0, 1)])
        );
        let p = XPolynomial::from_i64(q(), &[-1, 1]);
        assert_eq!(p_star(&p).unwrap(), AlgebraElement::from_i64(q(), &[(0, 0, 1), (1, 0, -1)]));
        let f1 = idempotent_f(q(), 1).unwrap();
        let p = XPolynomial::from_i64(q(), &[2, 0, 5]);
        assert_eq!(&f1 * &p_star(&p).unwrap(), f1.scale(&q().from_i64(5)));
        assert!(p_star(&XPolynomial::zero(q())).is_err());
    }

    #[test]
    fn socle_coordinates() {
        assert_eq!(socle_coord_basis(q(), 1), vec![idempotent_f(q(), 1).unwrap()]);
        let b = socle_coord_basis(q(), 2);
        assert_eq!(b[1], AlgebraElement::from_i64(q(), &[(0, 1, 1), (1, 2, -1)]));
        let x = AlgebraElement::x(q());
        for (k, s) in socle_coord_basis(q(), 5).iter().enumerate() {
            assert!((&x * s).is_zero());
            assert_eq!(*s, &x.pow(k as u32) * &idempotent_f(q(), k + 1).unwrap());
        }
    }

    #[test]
    fn field_mismatch_reported() {
        let a = AlgebraElement::x(q());
        let b = AlgebraElement::x(Field::Prime(5));
        assert!(matches!(a.try_mul(&b), Err(Error::FieldMismatch(_, _))));
        assert!(a.try_add(&b).is_err());
    }
}
