//! Representations of the Toeplitz graph and the modules they realize.
//!
//! The graph has vertices `u`, `v`, an edge `e: v → u` and a loop `f` at `v`.
//! A [`GammaRep`] stores `E = ψ_e` (`dim_u × dim_v`) and an invertible
//! `F = ψ_f` (`dim_v × dim_v`). It realizes the finite-length `R`-module
//!
//! ```text
//! M = (S_1 ⊗ M_u) ⊕ M_v
//! x · (r f_1 ⊗ m, w) = (x r f_1 ⊗ m, F w)
//! y · (r f_1 ⊗ m, w) = (y r f_1 ⊗ m + f_1 ⊗ E w, F⁻¹ w)
//! ```
//!
//! Elements of the realized module are [`ModuleVector`]s: a finitely supported
//! table over the basis `y^i f_1 ⊗ u_k` plus a coordinate vector in `M_v`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{idempotent_f, AlgebraElement};
use crate::certify::{certify, Budget};
use crate::error::{Error, Result};
use crate::linalg::{column_echelon, kernel_basis, rank, solve, Matrix};
use crate::poly::XPolynomial;
use crate::scalar::{Field, Scalar};

/// A finite-dimensional representation with invertible loop map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaRep {
    field: Field,
    dim_u: usize,
    dim_v: usize,
    e: Matrix,
    f: Matrix,
    f_inv: Matrix,
}

impl GammaRep {
    /// Checks shapes and invertibility of `F`.
    pub fn new(field: Field, dim_u: usize, dim_v: usize, e: Matrix, f: Matrix) -> Result<GammaRep> {
        field.check(e.field())?;
        field.check(f.field())?;
        if e.rows() != dim_u || e.cols() != dim_v {
            return Err(Error::Shape(format!(
                "E is {}x{}, expected {dim_u}x{dim_v}",
                e.rows(),
                e.cols()
            )));
        }
        if f.rows() != dim_v || f.cols() != dim_v {
            return Err(Error::Shape(format!(
                "F is {}x{}, expected {dim_v}x{dim_v}",
                f.rows(),
                f.cols()
            )));
        }
        let f_inv = f
            .inverse()
            .ok_or_else(|| Error::Singular("the loop map F must be invertible".into()))?;
        Ok(GammaRep {
            field,
            dim_u,
            dim_v,
            e,
            f,
            f_inv,
        })
    }

    pub fn zero(field: Field) -> GammaRep {
        build_s1_power(field, 0)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim_u(&self) -> usize {
        self.dim_u
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn f_inverse(&self) -> &Matrix {
        &self.f_inv
    }

    /// Random representation with `dim_u, dim_v ≤ max_dim`. Over `Q` the
    /// entries are small integers.
    pub fn random<R: Rng + ?Sized>(field: Field, rng: &mut R, max_dim: usize) -> GammaRep {
        let du = rng.gen_range(0..=max_dim);
        let dv = rng.gen_range(0..=max_dim);
        GammaRep::random_with_dims(field, rng, du, dv)
    }

    pub fn random_with_dims<R: Rng + ?Sized>(field: Field, rng: &mut R, du: usize, dv: usize) -> GammaRep {
        let e = random_matrix(field, rng, du, dv);
        loop {
            let f = random_matrix(field, rng, dv, dv);
            if let Ok(rep) = GammaRep::new(field, du, dv, e.clone(), f) {
                return rep;
            }
        }
    }

    /// Conjugates by a change of basis `(P_u, P_v)`: the result is isomorphic
    /// to `self` via that pair.
    pub fn conjugate(&self, p_u: &Matrix, p_v: &Matrix) -> Result<GammaRep> {
        if !p_u.is_invertible() {
            return Err(Error::Singular("change of basis on M_u".into()));
        }
        let pv_inv = p_v
            .inverse()
            .ok_or_else(|| Error::Singular("change of basis on M_v".into()))?;
        let e = p_u.mul(&self.e)?.mul(&pv_inv)?;
        let f = p_v.mul(&self.f)?.mul(&pv_inv)?;
        GammaRep::new(self.field, self.dim_u, self.dim_v, e, f)
    }
}

fn random_matrix<R: Rng + ?Sized>(field: Field, rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| field.random(rng, 2)).collect();
    Matrix::from_vec(field, rows, cols, data).expect("sized")
}

/// Random invertible `n × n` matrix.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = random_matrix(field, rng, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// `L_p = K[X, X⁻¹]/(p)`. Powers of `x` dividing `p` are units in the Laurent
/// ring and are stripped first, so `L_{x^a q} ≅ L_q`; a pure power of `x`
/// gives the zero representation.
pub fn build_lp(p: &XPolynomial) -> Result<GammaRep> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("L_p needs a nonzero polynomial".into()));
    }
    let (_, q) = p.strip_x_power();
    let field = p.field();
    let d = q.degree().expect("nonzero");
    if d == 0 {
        return Ok(GammaRep::zero(field));
    }
    GammaRep::new(field, 0, d, Matrix::zeros(field, 0, d), q.companion()?)
}

/// `S_1^{⊕k}`: `k`-dimensional `M_u`, empty `M_v`.
pub fn build_s1_power(field: Field, k: usize) -> GammaRep {
    GammaRep::new(field, k, 0, Matrix::zeros(field, k, 0), Matrix::zeros(field, 0, 0))
        .expect("empty loop is invertible")
}

pub fn direct_sum(a: &GammaRep, b: &GammaRep) -> Result<GammaRep> {
    a.field.check(b.field)?;
    GammaRep::new(
        a.field,
        a.dim_u + b.dim_u,
        a.dim_v + b.dim_v,
        a.e.block_diag(&b.e)?,
        a.f.block_diag(&b.f)?,
    )
}

/// Element of the realized module `(S_1 ⊗ M_u) ⊕ M_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector {
    field: Field,
    /// `(height i, u-index k) ↦` coefficient of `y^i f_1 ⊗ u_k`.
    s_part: BTreeMap<(usize, usize), Scalar>,
    v_part: Vec<Scalar>,
}

impl ModuleVector {
    pub fn zero(rep: &GammaRep) -> ModuleVector {
        ModuleVector {
            field: rep.field,
            s_part: BTreeMap::new(),
            v_part: vec![rep.field.zero(); rep.dim_v],
        }
    }

    /// Validates indices against `rep` and drops zero entries.
    pub fn new(
        rep: &GammaRep,
        s_part: impl IntoIterator<Item = ((usize, usize), Scalar)>,
        v_part: Vec<Scalar>,
    ) -> Result<ModuleVector> {
        if v_part.len() != rep.dim_v {
            return Err(Error::Shape(format!(
                "v-part of length {} for dim_v = {}",
                v_part.len(),
                rep.dim_v
            )));
        }
        if let Some(s) = v_part.iter().find(|s| s.field() != rep.field) {
            return Err(Error::FieldMismatch(rep.field, s.field()));
        }
        let mut m = ModuleVector {
            field: rep.field,
            s_part: BTreeMap::new(),
            v_part,
        };
        for ((h, k), c) in s_part {
            if k >= rep.dim_u {
                return Err(Error::InvalidArgument(format!(
                    "u-index {k} out of range for dim_u = {}",
                    rep.dim_u
                )));
            }
            rep.field.check(c.field())?;
            m.add_s(h, k, &c);
        }
        Ok(m)
    }

    pub fn s_part(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.s_part
    }

    pub fn v_part(&self) -> &[Scalar] {
        &self.v_part
    }

    pub fn is_zero(&self) -> bool {
        self.s_part.is_empty() && self.v_part.iter().all(Scalar::is_zero)
    }

    /// Largest height carrying a nonzero `s`-coefficient.
    pub fn max_height(&self) -> Option<usize> {
        self.s_part.keys().map(|&(h, _)| h).max()
    }

    fn add_s(&mut self, h: usize, k: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.s_part.entry((h, k)).or_insert_with(|| self.field.zero());
        *e += c;
        if e.is_zero() {
            self.s_part.remove(&(h, k));
        }
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.axpy(&self.field.one(), other);
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.axpy(&-self.field.one(), other);
        out
    }

    /// `self += c · other`
    pub fn axpy(&mut self, c: &Scalar, other: &ModuleVector) {
        for (&(h, k), v) in &other.s_part {
            self.add_s(h, k, &(c * v));
        }
        for (a, b) in self.v_part.iter_mut().zip(&other.v_part) {
            *a += &(c * b);
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVector {
        let mut out = ModuleVector {
            field: self.field,
            s_part: BTreeMap::new(),
            v_part: self.v_part.iter().map(|v| v * c).collect(),
        };
        for (&(h, k), v) in &self.s_part {
            out.add_s(h, k, &(v * c));
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(rep: &GammaRep, rng: &mut R, max_height: usize, terms: usize) -> ModuleVector {
        let mut m = ModuleVector::zero(rep);
        if rep.dim_u > 0 {
            for _ in 0..terms {
                let h = rng.gen_range(0..=max_height);
                let k = rng.gen_range(0..rep.dim_u);
                m.add_s(h, k, &rep.field.random(rng, 3));
            }
        }
        for v in m.v_part.iter_mut() {
            *v = rep.field.random(rng, 3);
        }
        m
    }

    fn check_against(&self, rep: &GammaRep) -> Result<()> {
        rep.field.check(self.field)?;
        if self.v_part.len() != rep.dim_v {
            return Err(Error::Shape(format!(
                "v-part of length {} for dim_v = {}",
                self.v_part.len(),
                rep.dim_v
            )));
        }
        if let Some(&(_, k)) = self.s_part.keys().find(|&&(_, k)| k >= rep.dim_u) {
            return Err(Error::InvalidArgument(format!(
                "u-index {k} out of range for dim_u = {}",
                rep.dim_u
            )));
        }
        Ok(())
    }
}

/// `x · m`: heights drop by one (height 0 is annihilated), `w ↦ F w`.
pub fn act_x(rep: &GammaRep, m: &ModuleVector) -> Result<ModuleVector> {
    m.check_against(rep)?;
    let mut out = ModuleVector {
        field: rep.field,
        s_part: BTreeMap::new(),
        v_part: rep.f.mul_vec(&m.v_part)?,
    };
    for (&(h, k), c) in &m.s_part {
        if h > 0 {
            out.s_part.insert((h - 1, k), c.clone());
        }
    }
    Ok(out)
}

/// `y · m`: heights rise by one, `f_1 ⊗ E w` appears at height 0, `w ↦ F⁻¹ w`.
pub fn act_y(rep: &GammaRep, m: &ModuleVector) -> Result<ModuleVector> {
    m.check_against(rep)?;
    let mut out = ModuleVector {
        field: rep.field,
        s_part: m.s_part.iter().map(|(&(h, k), c)| ((h + 1, k), c.clone())).collect(),
        v_part: rep.f_inv.mul_vec(&m.v_part)?,
    };
    for (k, c) in rep.e.mul_vec(&m.v_part)?.iter().enumerate() {
        out.add_s(0, k, c);
    }
    Ok(out)
}

/// Action of an arbitrary element: `y^i x^j` acts as `x` applied `j` times,
/// then `y` applied `i` times.
pub fn act_element(rep: &GammaRep, a: &AlgebraElement, m: &ModuleVector) -> Result<ModuleVector> {
    rep.field.check(a.field())?;
    m.check_against(rep)?;
    let mut out = ModuleVector::zero(rep);
    let mut x_powers = vec![m.clone()];
    for (mono, c) in a.terms() {
        while x_powers.len() <= mono.x {
            let next = act_x(rep, x_powers.last().unwrap())?;
            x_powers.push(next);
        }
        let mut v = x_powers[mono.x].clone();
        for _ in 0..mono.y {
            v = act_y(rep, &v)?;
        }
        out.axpy(c, &v);
    }
    Ok(out)
}

/// A morphism of representations: `φ_u E_a = E_b φ_v`, `φ_v F_a = F_b φ_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMorphism {
    pub u: Matrix,
    pub v: Matrix,
}

impl RepMorphism {
    pub fn identity(rep: &GammaRep) -> RepMorphism {
        RepMorphism {
            u: Matrix::identity(rep.field, rep.dim_u),
            v: Matrix::identity(rep.field, rep.dim_v),
        }
    }

    pub fn is_morphism(&self, a: &GammaRep, b: &GammaRep) -> bool {
        let shapes = self.u.rows() == b.dim_u
            && self.u.cols() == a.dim_u
            && self.v.rows() == b.dim_v
            && self.v.cols() == a.dim_v;
        shapes
            && self.u.mul(&a.e).ok() == b.e.mul(&self.v).ok()
            && self.v.mul(&a.f).ok() == b.f.mul(&self.v).ok()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.u.is_invertible() && self.v.is_invertible()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &RepMorphism) -> Result<RepMorphism> {
        Ok(RepMorphism {
            u: self.u.mul(&other.u)?,
            v: self.v.mul(&other.v)?,
        })
    }

    /// The realized module map `(id_{S_1} ⊗ φ_u) ⊕ φ_v`.
    pub fn apply(&self, target: &GammaRep, m: &ModuleVector) -> Result<ModuleVector> {
        let mut by_height: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
        for (&(h, k), c) in &m.s_part {
            if k >= self.u.cols() {
                return Err(Error::InvalidArgument(format!("u-index {k} out of range")));
            }
            by_height
                .entry(h)
                .or_insert_with(|| vec![m.field.zero(); self.u.cols()])[k] = c.clone();
        }
        let mut out = ModuleVector {
            field: target.field,
            s_part: BTreeMap::new(),
            v_part: self.v.mul_vec(&m.v_part)?,
        };
        for (h, col) in by_height {
            for (k, c) in self.u.mul_vec(&col)?.iter().enumerate() {
                out.add_s(h, k, c);
            }
        }
        Ok(out)
    }

    fn from_flat(field: Field, a: &GammaRep, b: &GammaRep, flat: &[Scalar]) -> RepMorphism {
        let nu = b.dim_u * a.dim_u;
        RepMorphism {
            u: Matrix::from_vec(field, b.dim_u, a.dim_u, flat[..nu].to_vec()).expect("sized"),
            v: Matrix::from_vec(field, b.dim_v, a.dim_v, flat[nu..].to_vec()).expect("sized"),
        }
    }
}

/// Matrix of a linear map given on coordinate vectors, built column by column.
pub(crate) fn matrix_of<F>(field: Field, n_in: usize, n_out: usize, mut map: F) -> Result<Matrix>
where
    F: FnMut(&[Scalar]) -> Result<Vec<Scalar>>,
{
    let mut cols = Vec::with_capacity(n_in);
    let mut unit = vec![field.zero(); n_in];
    for i in 0..n_in {
        unit[i] = field.one();
        let col = map(&unit)?;
        debug_assert_eq!(col.len(), n_out);
        cols.push(col);
        unit[i] = field.zero();
    }
    Ok(Matrix::from_columns(field, n_out, &cols))
}

/// Basis of `Hom_D(a, b)`, from the kernel of the intertwining system.
pub fn hom_space(a: &GammaRep, b: &GammaRep) -> Result<Vec<RepMorphism>> {
    a.field.check(b.field)?;
    let field = a.field;
    let n_in = b.dim_u * a.dim_u + b.dim_v * a.dim_v;
    let n_out = b.dim_u * a.dim_v + b.dim_v * a.dim_v;
    let system = matrix_of(field, n_in, n_out, |flat| {
        let phi = RepMorphism::from_flat(field, a, b, flat);
        let r1 = phi.u.mul(&a.e)?.sub(&b.e.mul(&phi.v)?)?;
        let r2 = phi.v.mul(&a.f)?.sub(&b.f.mul(&phi.v)?)?;
        let mut out = r1.entries().to_vec();
        out.extend_from_slice(r2.entries());
        Ok(out)
    })?;
    let ker = kernel_basis(&system);
    Ok(ker
        .columns()
        .iter()
        .map(|c| RepMorphism::from_flat(field, a, b, c))
        .collect())
}

pub fn hom_dim_d(a: &GammaRep, b: &GammaRep) -> Result<usize> {
    Ok(hom_space(a, b)?.len())
}

const RANDOM_ISO_ATTEMPTS: usize = 20;
const EXHAUSTIVE_LIMIT: u64 = 1 << 14;

fn combine(field: Field, a: &GammaRep, b: &GammaRep, basis: &[RepMorphism], coeffs: &[Scalar]) -> RepMorphism {
    let mut u = Matrix::zeros(field, b.dim_u, a.dim_u);
    let mut v = Matrix::zeros(field, b.dim_v, a.dim_v);
    for (phi, c) in basis.iter().zip(coeffs) {
        u = u.add(&phi.u.scale(c)).expect("shape");
        v = v.add(&phi.v.scale(c)).expect("shape");
    }
    RepMorphism { u, v }
}

/// Searches the hom space for an isomorphism `a → b`.
///
/// Random combinations come first (uniform over `F_p`, integers in `[-3, 3]`
/// over `Q`); when the hom space is small enough every combination is tried.
/// `None` means no witness was found, which for small hom spaces over a finite
/// field is a proof of non-isomorphism.
pub fn iso_witness(a: &GammaRep, b: &GammaRep) -> Result<Option<RepMorphism>> {
    a.field.check(b.field)?;
    if a.dim_u != b.dim_u || a.dim_v != b.dim_v || rank(&a.e) != rank(&b.e) {
        return Ok(None);
    }
    let field = a.field;
    let basis = hom_space(a, b)?;
    if basis.len() != hom_dim_d(a, a)? {
        return Ok(None);
    }
    if a.dim_u + a.dim_v == 0 {
        return Ok(Some(RepMorphism::identity(a)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..RANDOM_ISO_ATTEMPTS {
        let coeffs: Vec<Scalar> = basis.iter().map(|_| field.random(&mut rng, 3)).collect();
        let phi = combine(field, a, b, &basis, &coeffs);
        if phi.is_isomorphism() {
            return Ok(Some(phi));
        }
    }
    let values: Vec<Scalar> = match field.elements() {
        Some(all) => all,
        None => (-3..=3).map(|i| field.from_i64(i)).collect(),
    };
    let base = values.len() as u64;
    let total = base.checked_pow(basis.len() as u32);
    if basis.len() <= 2 || total.is_some_and(|t| t <= EXHAUSTIVE_LIMIT) {
        let mut digits = vec![0usize; basis.len()];
        loop {
            let coeffs: Vec<Scalar> = digits.iter().map(|&d| values[d].clone()).collect();
            let phi = combine(field, a, b, &basis, &coeffs);
            if phi.is_isomorphism() {
                return Ok(Some(phi));
            }
            let mut i = 0;
            while i < digits.len() && digits[i] + 1 == values.len() {
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
            digits[i] += 1;
        }
    }
    Ok(None)
}

pub fn is_isomorphic(a: &GammaRep, b: &GammaRep) -> Result<bool> {
    Ok(iso_witness(a, b)?.is_some())
}

/// Window of the realized module: heights `0..=height` of the `s`-part plus
/// all of `M_v`. Coordinates list `(i, k)` as `i · dim_u + k`, then `M_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ModuleWindow {
    pub dim_u: usize,
    pub dim_v: usize,
    pub height: usize,
}

impl ModuleWindow {
    pub fn new(rep: &GammaRep, height: usize) -> ModuleWindow {
        ModuleWindow {
            dim_u: rep.dim_u,
            dim_v: rep.dim_v,
            height,
        }
    }

    pub fn dim(&self) -> usize {
        (self.height + 1) * self.dim_u + self.dim_v
    }

    /// Dimension of the `s`-part up to and including `height`.
    pub fn s_dim(&self, height: usize) -> usize {
        (height + 1) * self.dim_u
    }

    pub fn vector(&self, rep: &GammaRep, coords: &[Scalar]) -> ModuleVector {
        let mut m = ModuleVector::zero(rep);
        let s_len = self.s_dim(self.height);
        for (idx, c) in coords[..s_len].iter().enumerate() {
            m.add_s(idx / self.dim_u, idx % self.dim_u, c);
        }
        m.v_part = coords[s_len..].to_vec();
        m
    }

    /// Coordinates, or `None` if `m` reaches above the window.
    pub fn coordinates(&self, m: &ModuleVector) -> Option<Vec<Scalar>> {
        let mut out = vec![m.field.zero(); self.dim()];
        for (&(h, k), c) in &m.s_part {
            if h > self.height {
                return None;
            }
            out[h * self.dim_u + k] = c.clone();
        }
        let s_len = self.s_dim(self.height);
        out[s_len..].clone_from_slice(&m.v_part);
        Some(out)
    }
}

/// Reads a representation back from the realized module.
///
/// `M_0` is computed as the kernel of `x` on a window, `ψ_e(w)` as the
/// `s`-component of `y · w` written in a basis of `M_0`, and `ψ_f(w)` as
/// `x · w`. The basis of `M_0` comes from a kernel computation, so the result
/// agrees with the input only up to isomorphism.
pub fn xi_extract(rep: &GammaRep) -> Result<GammaRep> {
    let field = rep.field;
    let win = ModuleWindow::new(rep, 1);
    let act_x_matrix = matrix_of(field, win.dim(), win.dim(), |c| {
        let image = act_x(rep, &win.vector(rep, c))?;
        Ok(win.coordinates(&image).expect("x lowers heights"))
    })?;
    let m0 = kernel_basis(&act_x_matrix);
    let du = m0.cols();
    let s_len = win.s_dim(1);
    if (0..du).any(|c| (s_len..win.dim()).any(|r| !m0[(r, c)].is_zero())) {
        return Err(Error::InvalidArgument(
            "kernel of x meets the designated complement".into(),
        ));
    }
    let dv = rep.dim_v;
    let mut e = Matrix::zeros(field, du, dv);
    let mut f = Matrix::zeros(field, dv, dv);
    for j in 0..dv {
        let mut w = vec![field.zero(); dv];
        w[j] = field.one();
        let embedded = ModuleVector::new(rep, [], w)?;
        let up = act_y(rep, &embedded)?;
        let mut m1 = win.coordinates(&up).expect("y of a v-vector sits at height 0");
        for c in m1[s_len..].iter_mut() {
            *c = field.zero();
        }
        let coeffs = solve(&m0, &m1)?.ok_or_else(|| {
            Error::InvalidArgument("s-component of y·w is not killed by x".into())
        })?;
        for (i, c) in coeffs.into_iter().enumerate() {
            e[(i, j)] = c;
        }
        let down = act_x(rep, &embedded)?;
        if !down.s_part.is_empty() {
            return Err(Error::InvalidArgument("x·w leaves the designated complement".into()));
        }
        for (i, c) in down.v_part.into_iter().enumerate() {
            f[(i, j)] = c;
        }
    }
    GammaRep::new(field, du, dv, e, f)
}

/// `Ψ` followed by `Ξ`, with an isomorphism back to the input when one is found.
pub fn roundtrip(rep: &GammaRep) -> Result<(GammaRep, Option<RepMorphism>)> {
    let back = xi_extract(rep)?;
    let witness = iso_witness(&back, rep)?;
    Ok((back, witness))
}

/// Structural statistics of the realized module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepStats {
    /// Length of `IM`, the number of faithful simple factors.
    pub ell_im: usize,
    pub dim_m_mod_im: usize,
    /// Number of `S_1` summands that split off.
    pub d_m: usize,
}

pub fn stats(rep: &GammaRep) -> RepStats {
    RepStats {
        ell_im: rep.dim_u,
        dim_m_mod_im: rep.dim_v,
        d_m: rep.dim_u - rank(&rep.e),
    }
}

/// `M/IM` as a module over `K[X, X⁻¹]`: the loop map alone.
pub fn top_module(rep: &GammaRep) -> GammaRep {
    GammaRep::new(
        rep.field,
        0,
        rep.dim_v,
        Matrix::zeros(rep.field, 0, rep.dim_v),
        rep.f.clone(),
    )
    .expect("F already checked")
}

/// Solves `f_k · n = 0` for `k = 1..=dim_v + height + 1` over the window of
/// the given height. Returns the `v`-projection of the solution space in
/// canonical column form.
fn lf_window(rep: &GammaRep, height: usize) -> Result<Matrix> {
    let field = rep.field;
    let win = ModuleWindow::new(rep, height);
    let k_max = rep.dim_v + height + 1;
    let fs: Vec<AlgebraElement> = (1..=k_max)
        .map(|k| idempotent_f(field, k))
        .collect::<Result<_>>()?;
    let top = height.max(k_max) + 1;
    let big = ModuleWindow::new(rep, top);
    let system = matrix_of(field, win.dim(), big.dim() * k_max, |c| {
        let n = win.vector(rep, c);
        let mut out = Vec::with_capacity(big.dim() * k_max);
        for f in &fs {
            let image = act_element(rep, f, &n)?;
            out.extend(big.coordinates(&image).expect("f_k keeps heights bounded"));
        }
        Ok(out)
    })?;
    let sol = kernel_basis(&system);
    let s_len = win.s_dim(height);
    let projected: Vec<Vec<Scalar>> = sol
        .columns()
        .into_iter()
        .map(|c| c[s_len..].to_vec())
        .collect();
    let proj = Matrix::from_columns(field, rep.dim_v, &projected);
    if rank(&proj) != sol.cols() {
        return Err(Error::InvalidArgument(
            "locally finite part does not embed in M/IM".into(),
        ));
    }
    Ok(column_echelon(&proj))
}

/// `lf(M)`, the largest locally finite submodule, as a `K[X, X⁻¹]`-module.
///
/// It is the annihilator of the socle, found by a windowed solve of
/// `f_k · n = 0` and certified by agreement of two consecutive windows.
pub fn lf_module(rep: &GammaRep, budget: &Budget) -> Result<GammaRep> {
    let field = rep.field;
    let h0 = budget.initial.map_or(2, |(y, _)| y.max(1));
    let basis = certify("locally finite submodule", budget, |level| {
        lf_window(rep, h0 << level).map(Some)
    })?;
    let d = basis.cols();
    // The loop map restricted to the (F-invariant) subspace.
    let mut f = Matrix::zeros(field, d, d);
    for j in 0..d {
        let image = rep.f.mul_vec(&basis.column(j))?;
        let coeffs = solve(&basis, &image)?
            .ok_or_else(|| Error::InvalidArgument("lf subspace is not F-invariant".into()))?;
        for (i, c) in coeffs.into_iter().enumerate() {
            f[(i, j)] = c;
        }
    }
    GammaRep::new(field, 0, d, Matrix::zeros(field, 0, d), f)
}

pub fn lf_dim(rep: &GammaRep, budget: &Budget) -> Result<usize> {
    Ok(lf_module(rep, budget)?.dim_v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn f5() -> Field {
        Field::Prime(5)
    }

    fn q() -> Field {
        Field::Rationals
    }

    fn rep(field: Field, du: usize, dv: usize, e: &[i64], f: &[i64]) -> GammaRep {
        GammaRep::new(
            field,
            du,
            dv,
            Matrix::from_i64(field, du, dv, e),
            Matrix::from_i64(field, dv, dv, f),
        )
        .unwrap()
    }

    fn lp(field: Field, coeffs: &[i64]) -> GammaRep {
        build_lp(&XPolynomial::from_i64(field, coeffs)).unwrap()
    }

    /// `∩_k ker(E F^k)`: vectors whose orbit under the loop never reaches `M_u`.
    fn lf_closed_form(rep: &GammaRep) -> usize {
        let mut stacked = Vec::new();
        let mut power = Matrix::identity(rep.field, rep.dim_v);
        for _ in 0..rep.dim_v.max(1) {
            stacked.push(rep.e.mul(&power).unwrap());
            power = rep.f.mul(&power).unwrap();
        }
        let rows: Vec<Scalar> = stacked.iter().flat_map(|m| m.entries().to_vec()).collect();
        let big = Matrix::from_vec(rep.field, rep.dim_u * stacked.len(), rep.dim_v, rows).unwrap();
        rep.dim_v - rank(&big)
    }

    #[test]
    fn validation() {
        assert!(GammaRep::new(q(), 1, 1, Matrix::from_i64(q(), 1, 1, &[0]), Matrix::from_i64(q(), 1, 1, &[1])).is_ok());
        let singular = GammaRep::new(q(), 0, 1, Matrix::zeros(q(), 0, 1), Matrix::from_i64(q(), 1, 1, &[0]));
        assert!(matches!(singular, Err(Error::Singular(_))));
        assert_eq!(build_s1_power(q(), 2).dim_u(), 2);
        let bad = GammaRep::new(q(), 2, 1, Matrix::zeros(q(), 1, 1), Matrix::identity(q(), 1));
        assert!(matches!(bad, Err(Error::Shape(_))));
    }

    #[test]
    fn lp_construction() {
        assert_eq!(lp(q(), &[-1, 1]), rep(q(), 0, 1, &[], &[1]));
        assert_eq!(lp(q(), &[1, 1, 1]).f(), &Matrix::from_i64(q(), 2, 2, &[0, -1, 1, -1]));
        assert_eq!(lp(q(), &[0, 0, 1]), GammaRep::zero(q()));
        assert_eq!(lp(q(), &[0, -1, 1]), lp(q(), &[-1, 1]));
        assert!(build_lp(&XPolynomial::zero(q())).is_err());
    }

    #[test]
    fn sums() {
        let a = rep(q(), 2, 1, &[1, 0], &[3]);
        assert_eq!(direct_sum(&a, &GammaRep::zero(q())).unwrap(), a);
        let s = direct_sum(&build_s1_power(q(), 1), &lp(q(), &[-1, 1])).unwrap();
        assert_eq!(s, rep(q(), 1, 1, &[0], &[1]));
        let b = rep(q(), 1, 2, &[0, 1], &[1, 0, 0, 1]);
        let ab = direct_sum(&a, &b).unwrap();
        assert_eq!((ab.dim_u(), ab.dim_v()), (3, 3));
        assert!(direct_sum(&a, &GammaRep::zero(f5())).is_err());
    }

    #[test]
    fn x_undoes_y() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let r = GammaRep::random(f5(), &mut rng, 4);
            let m = ModuleVector::random(&r, &mut rng, 5, 4);
            assert_eq!(act_x(&r, &act_y(&r, &m).unwrap()).unwrap(), m);
        }
    }

    #[test]
    fn x_kills_height_zero() {
        let r = rep(q(), 1, 1, &[1], &[2]);
        let m = ModuleVector::new(&r, [((0, 0), q().from_i64(4))], vec![q().from_i64(1)]).unwrap();
        let xm = act_x(&r, &m).unwrap();
        assert!(xm.s_part().is_empty());
        assert_eq!(xm.v_part(), &[q().from_i64(2)]);
        let r = lp(q(), &[1, 1, 1]);
        let m = ModuleVector::new(&r, [], vec![q().one(), q().zero()]).unwrap();
        assert_eq!(act_x(&r, &m).unwrap().v_part(), &[q().zero(), q().one()]);
    }

    #[test]
    fn idempotent_on_complement_vector() {
        // f_1 · (0, w) = (−E F w at height 0, 0)
        let r = rep(q(), 2, 2, &[1, 2, 0, 1], &[1, 1, 0, 1]);
        let w = vec![q().from_i64(1), q().from_i64(-1)];
        let m = ModuleVector::new(&r, [], w.clone()).unwrap();
        let got = act_element(&r, &idempotent_f(q(), 1).unwrap(), &m).unwrap();
        let efw = r.e().mul(r.f()).unwrap().mul_vec(&w).unwrap();
        let expected = ModuleVector::new(&r, efw.iter().enumerate().map(|(k, c)| ((0, k), -c)), vec![q().zero(); 2]).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn idempotent_fixes_height_zero() {
        let r = build_s1_power(q(), 2);
        let m = ModuleVector::new(&r, [((0, 1), q().from_i64(3))], vec![]).unwrap();
        let yx = AlgebraElement::monomial(q(), 1, 1);
        assert!(act_element(&r, &yx, &m).unwrap().is_zero());
        assert_eq!(act_element(&r, &idempotent_f(q(), 1).unwrap(), &m).unwrap(), m);
    }

    #[test]
    fn xy_power_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = GammaRep::random_with_dims(q(), &mut rng, 2, 2);
        let m = ModuleVector::random(&r, &mut rng, 3, 3);
        for k in 0..4 {
            let a = AlgebraElement::x(q()).pow(k) * AlgebraElement::y(q()).pow(k);
            assert_eq!(act_element(&r, &a, &m).unwrap(), m);
        }
    }

    #[test]
    fn index_errors() {
        let r = build_s1_power(q(), 1);
        assert!(ModuleVector::new(&r, [((0, 1), q().one())], vec![]).is_err());
        let m = ModuleVector::new(&r, [((0, 0), q().one())], vec![]).unwrap();
        assert!(act_x(&build_s1_power(q(), 0), &m).is_err());
    }

    #[test]
    fn extraction_examples() {
        for r in [build_s1_power(q(), 1), lp(q(), &[-1, 1]), lp(q(), &[1, 1, 1])] {
            let (back, witness) = roundtrip(&r).unwrap();
            let w = witness.expect("isomorphic");
            assert!(w.is_morphism(&back, &r) && w.is_isomorphism());
        }
    }

    #[test]
    fn extraction_random_f5() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let r = GammaRep::random(f5(), &mut rng, 4);
            let (back, witness) = roundtrip(&r).unwrap();
            let w = witness.expect("round trip must be isomorphic");
            assert!(w.is_morphism(&back, &r) && w.is_isomorphism());
        }
    }

    #[test]
    fn hom_examples() {
        let s1 = build_s1_power(q(), 1);
        assert_eq!(hom_dim_d(&s1, &s1).unwrap(), 1);
        assert_eq!(hom_dim_d(&lp(q(), &[-1, 1]), &s1).unwrap(), 0);
        assert_eq!(hom_dim_d(&lp(q(), &[-1, 1]), &lp(q(), &[-2, 1])).unwrap(), 0);
        assert!(hom_dim_d(&s1, &build_s1_power(f5(), 1)).is_err());
    }

    #[test]
    fn stats_examples() {
        assert_eq!(stats(&build_s1_power(q(), 3)), RepStats { ell_im: 3, dim_m_mod_im: 0, d_m: 3 });
        assert_eq!(stats(&lp(q(), &[1, 1, 1])), RepStats { ell_im: 0, dim_m_mod_im: 2, d_m: 0 });
        assert_eq!(stats(&rep(q(), 1, 2, &[1, 0], &[1, 0, 0, 1])), RepStats { ell_im: 1, dim_m_mod_im: 2, d_m: 0 });
    }

    #[test]
    fn lf_examples() {
        let b = Budget::default();
        assert_eq!(lf_dim(&lp(q(), &[1, 1, 1]), &b).unwrap(), 2);
        assert_eq!(lf_dim(&build_s1_power(q(), 3), &b).unwrap(), 0);
        assert_eq!(lf_dim(&rep(q(), 1, 1, &[1], &[1]), &b).unwrap(), 0);
        // E sees only the first coordinate and F swaps: nothing escapes detection.
        assert_eq!(lf_dim(&rep(q(), 1, 2, &[1, 0], &[0, 1, 1, 0]), &b).unwrap(), 0);
        assert_eq!(lf_dim(&rep(q(), 1, 2, &[1, 0], &[1, 0, 0, 1]), &b).unwrap(), 1);
    }

    #[test]
    fn lf_matches_orbit_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let r = GammaRep::random(f5(), &mut rng, 3);
            assert_eq!(lf_dim(&r, &Budget::default()).unwrap(), lf_closed_form(&r));
        }
    }

    #[test]
    fn lf_zero_budget_fails() {
        let r = lp(q(), &[-1, 1]);
        assert!(matches!(
            lf_dim(&r, &Budget::with_doublings(0)),
            Err(Error::NonStabilization { .. })
        ));
    }

    #[test]
    fn non_isomorphic_detected() {
        let a = rep(f5(), 1, 1, &[0], &[1]);
        let b = rep(f5(), 1, 1, &[1], &[1]);
        assert!(!is_isomorphic(&a, &b).unwrap());
        assert!(is_isomorphic(&b, &rep(f5(), 1, 1, &[3], &[1])).unwrap());
    }

    fn arb_rep() -> impl Strategy<Value = (u64, usize)> {
        (any::<u64>(), 0usize..=3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn y_then_x_is_one_minus_f1(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = GammaRep::random(f5(), &mut rng, 3);
            let m = ModuleVector::random(&r, &mut rng, 4, 3);
            let yx = act_y(&r, &act_x(&r, &m).unwrap()).unwrap();
            let f1m = act_element(&r, &idempotent_f(f5(), 1).unwrap(), &m).unwrap();
            prop_assert_eq!(yx, m.sub(&f1m));
        }

        #[test]
        fn action_is_multiplicative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = GammaRep::random(f5(), &mut rng, 3);
            let m = ModuleVector::random(&r, &mut rng, 3, 3);
            let a = AlgebraElement::random(f5(), &mut rng, 3, 3);
            let b = AlgebraElement::random(f5(), &mut rng, 3, 3);
            let lhs = act_element(&r, &(&a * &b), &m).unwrap();
            let rhs = act_element(&r, &a, &act_element(&r, &b, &m).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(act_element(&r, &AlgebraElement::one(f5()), &m).unwrap(), m);
        }

        #[test]
        fn realized_morphisms_compose((seed, dim) in arb_rep()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = GammaRep::random(f5(), &mut rng, dim);
            let b = direct_sum(&a, &GammaRep::random(f5(), &mut rng, 2)).unwrap();
            let c = direct_sum(&GammaRep::random(f5(), &mut rng, 2), &b).unwrap();
            let hab = hom_space(&a, &b).unwrap();
            let hbc = hom_space(&b, &c).unwrap();
            let pick = |basis: &[RepMorphism], x: &GammaRep, y: &GammaRep, rng: &mut ChaCha8Rng| {
                let coeffs: Vec<Scalar> = basis.iter().map(|_| f5().random(rng, 3)).collect();
                combine(f5(), x, y, basis, &coeffs)
            };
            let phi = pick(&hab, &a, &b, &mut rng);
            let chi = pick(&hbc, &b, &c, &mut rng);
            prop_assert!(phi.is_morphism(&a, &b) && chi.is_morphism(&b, &c));
            let m = ModuleVector::random(&a, &mut rng, 3, 3);
            let composed = chi.compose(&phi).unwrap().apply(&c, &m).unwrap();
            let stepwise = chi.apply(&c, &phi.apply(&b, &m).unwrap()).unwrap();
            prop_assert_eq!(&composed, &stepwise);
            // Realized maps commute with the action.
            let xm = phi.apply(&b, &act_y(&a, &m).unwrap()).unwrap();
            prop_assert_eq!(xm, act_y(&b, &phi.apply(&b, &m).unwrap()).unwrap());
        }

        #[test]
        fn hom_dimension_is_conjugation_invariant((seed, dim) in arb_rep()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = GammaRep::random(f5(), &mut rng, dim);
            let b = GammaRep::random(f5(), &mut rng, 3);
            let pu = random_invertible(f5(), &mut rng, b.dim_u());
            let pv = random_invertible(f5(), &mut rng, b.dim_v());
            let b2 = b.conjugate(&pu, &pv).unwrap();
            prop_assert_eq!(hom_dim_d(&a, &b).unwrap(), hom_dim_d(&a, &b2).unwrap());
            prop_assert!(is_isomorphic(&b, &b2).unwrap());
        }

        #[test]
        fn split_summands_add(seed in any::<u64>(), k in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dv = rng.gen_range(1..=3);
            let du = rng.gen_range(0..=dv);
            // Full row rank E.
            let r = loop {
                let r = GammaRep::random_with_dims(f5(), &mut rng, du, dv);
                if rank(r.e()) == du { break r; }
            };
            let sum = direct_sum(&build_s1_power(f5(), k), &r).unwrap();
            prop_assert_eq!(stats(&sum).d_m, k + stats(&r).d_m);
        }

        #[test]
        fn lf_bounded_by_top((seed, dim) in arb_rep()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = GammaRep::random(Field::Prime(3), &mut rng, dim);
            prop_assert!(lf_dim(&r, &Budget::default()).unwrap() <= r.dim_v());
        }
    }
}
