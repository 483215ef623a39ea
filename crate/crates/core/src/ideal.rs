//! Finitely generated left ideals `H = Rg_1 + … + Rg_n` and their canonical
//! form `H = K[y]L ⊕ Rp(x)`.
//!
//! `p` is the monic generator of `H ∩ K[x]` (zero when `H` lies in the socle,
//! one for the unit ideal) and `L = H ∩ span{x^{k−1} f_k}` with `k ≤ deg p`
//! (all `k` when `p = 0`). Both are located inside finite truncation windows
//! and certified by window doubling. Two facts are exact and used as sanity
//! gates on every window: `H` is semisimple iff every generator lies in the
//! socle, and the Laurent image of `p` generates the same ideal of
//! `K[X, X^{-1}]` as the images of the generators.

use std::fmt;

use crate::algebra::{socle_coordinate, AlgebraElement, Monomial};
use crate::certify::{certify, Budget};
use crate::error::{Error, Result};
use crate::linalg::{column_echelon, kernel_basis, Matrix, SparseEchelon, SparseVec};
use crate::poly::XPolynomial;
use crate::scalar::{Field, Scalar};

/// The coordinate box `{y^i x^j : i ≤ max_y, j ≤ max_x}`.
///
/// Coordinates are indexed with the pure `x`-powers first (`x^j ↦ j`),
/// followed by the rows `i = 1, 2, …`; see [`TruncationWindow::index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    pub max_y: usize,
    pub max_x: usize,
}

impl TruncationWindow {
    pub fn new(max_y: usize, max_x: usize) -> TruncationWindow {
        TruncationWindow { max_y, max_x }
    }

    /// Generator support plus a margin of `(4, 4)`.
    pub fn initial_for(gens: &[AlgebraElement]) -> TruncationWindow {
        let my = gens.iter().map(AlgebraElement::max_y).max().unwrap_or(0);
        let mx = gens.iter().map(AlgebraElement::max_x).max().unwrap_or(0);
        TruncationWindow::new(my + 4, mx + 4)
    }

    pub fn doubled(&self, times: usize) -> TruncationWindow {
        TruncationWindow::new(self.max_y << times, self.max_x << times)
    }

    pub fn dim(&self) -> usize {
        (self.max_y + 1) * (self.max_x + 1)
    }

    pub fn contains(&self, m: Monomial) -> bool {
        m.y <= self.max_y && m.x <= self.max_x
    }

    pub fn fits(&self, a: &AlgebraElement) -> bool {
        a.terms().keys().all(|m| self.contains(*m))
    }

    pub fn index(&self, m: Monomial) -> usize {
        debug_assert!(self.contains(m));
        m.y * (self.max_x + 1) + m.x
    }

    pub fn monomial(&self, idx: usize) -> Monomial {
        Monomial::new(idx / (self.max_x + 1), idx % (self.max_x + 1))
    }

    pub fn coordinates(&self, a: &AlgebraElement) -> SparseVec {
        a.terms().iter().map(|(m, c)| (self.index(*m), c.clone())).collect()
    }

    pub fn element(&self, field: Field, v: &SparseVec) -> AlgebraElement {
        AlgebraElement::from_terms(field, v.iter().map(|(k, c)| (self.monomial(*k), c.clone())))
    }
}

fn common_field(gens: &[AlgebraElement]) -> Result<Option<Field>> {
    let Some(first) = gens.first() else {
        return Ok(None);
    };
    for g in gens {
        first.field().check(g.field())?;
    }
    Ok(Some(first.field()))
}

/// Echelon basis of `span{y^a x^b g}` over the products that stay inside `w`.
pub fn span_echelon(gens: &[AlgebraElement], field: Field, w: TruncationWindow) -> Result<SparseEchelon> {
    let mut ech = SparseEchelon::new(field);
    for g in gens {
        if !w.fits(g) {
            return Err(Error::InvalidArgument(format!(
                "window {}x{} too small for generator support",
                w.max_y, w.max_x
            )));
        }
        if g.is_zero() {
            continue;
        }
        let reach = w.max_x + g.max_y();
        for a in 0..=w.max_y {
            for b in 0..=reach {
                let prod = g.left_mul_monomial(Monomial::new(a, b));
                if w.fits(&prod) {
                    ech.insert(w.coordinates(&prod));
                }
            }
        }
    }
    Ok(ech)
}

/// Canonical column-echelon basis of the windowed span, rows indexed by
/// [`TruncationWindow::index`].
pub fn window_span(gens: &[AlgebraElement], w: TruncationWindow) -> Result<Matrix> {
    let Some(field) = common_field(gens)? else {
        return Err(Error::InvalidArgument("no generators".into()));
    };
    let ech = span_echelon(gens, field, w)?;
    let n = w.dim();
    let cols: Vec<Vec<Scalar>> = ech
        .basis()
        .map(|v| {
            let mut dense = vec![field.zero(); n];
            for (k, c) in v {
                dense[*k] = c.clone();
            }
            dense
        })
        .collect();
    Ok(column_echelon(&Matrix::from_columns(field, n, &cols)))
}

/// `(p, L)` with `p` monic, zero, or one, and `L` in canonical column-echelon
/// form over the socle coordinates `x^{k−1} f_k`, `k = 1..=L.rows()`. Rows
/// are trimmed so the last row is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCanonicalForm {
    pub p: XPolynomial,
    pub l: Matrix,
}

impl IdealCanonicalForm {
    pub fn field(&self) -> Field {
        self.p.field()
    }

    pub fn is_semisimple(&self) -> bool {
        self.p.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.p.degree() == Some(0)
    }

    /// Socle elements spanning `L`.
    pub fn socle_generators(&self) -> Vec<AlgebraElement> {
        let f = self.field();
        (0..self.l.cols())
            .map(|c| {
                let mut e = AlgebraElement::zero(f);
                for r in 0..self.l.rows() {
                    let coeff = &self.l[(r, c)];
                    if !coeff.is_zero() {
                        e = &e + &socle_coordinate(f, r + 1).scale(coeff);
                    }
                }
                e
            })
            .collect()
    }

    /// Generators of `K[y]L ⊕ Rp`. The zero ideal is generated by `0`, which
    /// keeps the field attached.
    pub fn generators(&self) -> Vec<AlgebraElement> {
        let mut g = self.socle_generators();
        if !self.p.is_zero() {
            g.push(AlgebraElement::from_x_polynomial(&self.p));
        }
        if g.is_empty() {
            g.push(AlgebraElement::zero(self.field()));
        }
        g
    }
}

impl fmt::Display for IdealCanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {}; L = [", self.p)?;
        for (i, col) in self.l.columns().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let text: Vec<String> = col.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", text.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Gcd over `K[x]` of the polynomials `x^{max_y(g)} g`, all of which lie in
/// `H`. The minimal polynomial divides it.
fn polynomial_multiple(gens: &[AlgebraElement], field: Field) -> XPolynomial {
    let mut acc = XPolynomial::zero(field);
    for g in gens {
        let shifted = g.left_mul_monomial(Monomial::new(0, g.max_y()));
        let poly = shifted.as_x_polynomial().expect("x^n g is a polynomial for n ≥ max_y");
        acc = acc.gcd(&poly);
    }
    acc
}

/// Exact generator (`q(0) ≠ 0`, monic) of the image of `H` in `K[X, X^{-1}]`.
fn laurent_generator(gens: &[AlgebraElement], field: Field) -> XPolynomial {
    gens.iter().fold(XPolynomial::zero(field), |acc, g| {
        acc.gcd(&g.quotient_to_laurent().normalized_polynomial())
    })
}

fn trim_rows(l: &Matrix) -> Matrix {
    let keep = (0..l.rows())
        .rev()
        .find(|&r| (0..l.cols()).any(|c| !l[(r, c)].is_zero()))
        .map_or(0, |r| r + 1);
    let cols: Vec<Vec<Scalar>> = l.columns().into_iter().map(|c| c[..keep].to_vec()).collect();
    Matrix::from_columns(l.field(), keep, &cols)
}

/// `H_w ∩ span{x^{k−1} f_k : k ≤ d}` as coordinate columns.
fn socle_part(ech: &SparseEchelon, w: TruncationWindow, field: Field, d: usize) -> Matrix {
    let d = d.min(w.max_x);
    if d == 0 || w.max_y == 0 {
        return Matrix::zeros(field, 0, 0);
    }
    let residues: Vec<SparseVec> = (1..=d)
        .map(|k| ech.reduce(&w.coordinates(&socle_coordinate(field, k))))
        .collect();
    let mut keys: Vec<usize> = residues.iter().flat_map(|r| r.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut m = Matrix::zeros(field, keys.len(), d);
    for (c, r) in residues.iter().enumerate() {
        for (k, v) in r {
            let row = keys.binary_search(k).unwrap();
            m[(row, c)] = v.clone();
        }
    }
    trim_rows(&column_echelon(&kernel_basis(&m)))
}

/// Snapshot of the canonical form inside one window, or `None` when the
/// window demonstrably misses part of the answer.
fn snapshot(
    gens: &[AlgebraElement],
    field: Field,
    w: TruncationWindow,
    semisimple: bool,
    laurent: &XPolynomial,
    multiple: &XPolynomial,
) -> Result<Option<IdealCanonicalForm>> {
    let ech = span_echelon(gens, field, w)?;
    let p = if semisimple {
        XPolynomial::zero(field)
    } else {
        let Some((_, v)) = ech.below(w.max_x + 1).next() else {
            return Ok(None);
        };
        let coeffs: Vec<Scalar> = (0..=w.max_x)
            .map(|j| v.get(&j).cloned().unwrap_or_else(|| field.zero()))
            .collect();
        let p = XPolynomial::from_coeffs(field, coeffs).monic();
        if p.strip_x_power().1 != *laurent || !multiple.div_rem(&p)?.1.is_zero() {
            return Ok(None);
        }
        p
    };
    let d = match p.degree() {
        Some(d) => d,
        None => w.max_x,
    };
    let l = socle_part(&ech, w, field, d);
    Ok(Some(IdealCanonicalForm { p, l }))
}

/// Certified canonical form of `Rg_1 + … + Rg_n`.
pub fn canonical_form(gens: &[AlgebraElement], budget: &Budget) -> Result<IdealCanonicalForm> {
    let Some(field) = common_field(gens)? else {
        return Ok(IdealCanonicalForm {
            p: XPolynomial::zero(Field::Rationals),
            l: Matrix::zeros(Field::Rationals, 0, 0),
        });
    };
    let gens: Vec<AlgebraElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Ok(IdealCanonicalForm {
            p: XPolynomial::zero(field),
            l: Matrix::zeros(field, 0, 0),
        });
    }
    let semisimple = gens.iter().all(AlgebraElement::in_socle);
    let laurent = laurent_generator(&gens, field);
    let multiple = polynomial_multiple(&gens, field);
    if !semisimple && laurent.degree() == Some(0) && multiple.degree() == Some(0) {
        // a generator is a unit polynomial already
        return Ok(IdealCanonicalForm {
            p: XPolynomial::one(field),
            l: Matrix::zeros(field, 0, 0),
        });
    }
    let base = initial_window(&gens, budget);
    let mut last = base;
    let form = certify("ideal canonical form", budget, |level| {
        last = base.doubled(level);
        snapshot(&gens, field, last, semisimple, &laurent, &multiple)
    })?;
    verify_reconstruction(&gens, &form, last)?;
    Ok(form)
}

fn initial_window(gens: &[AlgebraElement], budget: &Budget) -> TruncationWindow {
    let auto = TruncationWindow::initial_for(gens);
    match budget.initial {
        Some((y, x)) => TruncationWindow::new(y.max(auto.max_y - 4).max(1), x.max(auto.max_x - 4).max(1)),
        None => auto,
    }
}

/// Every generator must lie in the span of the reconstructed ideal.
fn verify_reconstruction(gens: &[AlgebraElement], form: &IdealCanonicalForm, w: TruncationWindow) -> Result<()> {
    let recon = form.generators();
    let mut all = recon.clone();
    all.extend(gens.iter().cloned());
    let w = TruncationWindow::initial_for(&all).doubled(0).max_with(w);
    let ech = span_echelon(&recon, form.field(), w)?;
    if gens.iter().all(|g| ech.contains(&w.coordinates(g))) {
        Ok(())
    } else {
        Err(Error::NonStabilization {
            what: "ideal reconstruction".into(),
            attempts: 1,
        })
    }
}

impl TruncationWindow {
    fn max_with(self, other: TruncationWindow) -> TruncationWindow {
        TruncationWindow::new(self.max_y.max(other.max_y), self.max_x.max(other.max_x))
    }
}

/// The monic generator of `H ∩ K[x]` (zero for semisimple `H`).
pub fn minimal_polynomial(gens: &[AlgebraElement], budget: &Budget) -> Result<XPolynomial> {
    if gens.iter().all(AlgebraElement::is_zero) {
        return Err(Error::InvalidArgument("all generators are zero".into()));
    }
    Ok(canonical_form(gens, budget)?.p)
}

/// Basis of `H ∩ span{x^{k−1} f_k : k ≤ deg p}` given the minimal polynomial.
pub fn socle_component(gens: &[AlgebraElement], p: &XPolynomial, budget: &Budget) -> Result<Matrix> {
    let form = canonical_form(gens, budget)?;
    if form.p != *p {
        return Err(Error::InvalidArgument(format!(
            "{p} is not the minimal polynomial (found {})",
            form.p
        )));
    }
    Ok(form.l)
}

pub fn member(e: &AlgebraElement, gens: &[AlgebraElement], budget: &Budget) -> Result<bool> {
    if e.is_zero() {
        return Ok(true);
    }
    let base = canonical_form(gens, budget)?;
    let mut extended = gens.to_vec();
    extended.push(e.clone());
    Ok(canonical_form(&extended, budget)? == base)
}

pub fn is_semisimple(form: &IdealCanonicalForm) -> bool {
    form.is_semisimple()
}
