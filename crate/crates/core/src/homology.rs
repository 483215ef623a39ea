//! Hom and Ext dimensions between finite-length modules.
//!
//! Two independent routes are provided. The closed formulas reduce everything
//! to linear algebra over `K[X, X⁻¹]` plus the statistics of a [`GammaRep`];
//! the oracle instead builds a projective presentation of the source module
//!
//! ```text
//! R^{m_v} --δ--> S_1^{m_u} ⊕ R^{m_v} --ε--> M → 0
//! δ(e_j) = y e_j − f_1 ⊗ E v_j − Σ_k (F⁻¹)_{kj} e_k
//! ```
//!
//! and reads Hom and Ext¹ off the kernel and cokernel of
//! `Hom(P_0, N) → Hom(P_1, N)` on windows of the realized target.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{idempotent_f, mono_mul, AlgebraElement, Monomial};
use crate::certify::{certify, Budget};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, solve, Matrix, SparseEchelon, SparseVec};
use crate::poly::XPolynomial;
use crate::rep::{
    act_element, build_lp, build_s1_power, direct_sum, hom_space, lf_module, matrix_of, stats,
    top_module, GammaRep, ModuleVector, ModuleWindow, RepMorphism,
};
use crate::scalar::{Field, Scalar};

fn check_loop(name: &str, m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{name} must be square")));
    }
    if !m.is_invertible() {
        return Err(Error::Singular(format!(
            "{name} does not define a K[X, X^-1]-module"
        )));
    }
    Ok(())
}

/// `dim {Φ : Φ A = B Φ}`, the Hom space between the `K[X, X⁻¹]`-modules on
/// which `X` acts by `A` and `B`.
pub fn laurent_hom_dim(a: &Matrix, b: &Matrix) -> Result<usize> {
    a.field().check(b.field())?;
    check_loop("A", a)?;
    check_loop("B", b)?;
    let (na, nb) = (a.rows(), b.rows());
    let field = a.field();
    let system = matrix_of(field, nb * na, nb * na, |flat| {
        let phi = Matrix::from_vec(field, nb, na, flat.to_vec())?;
        Ok(phi.mul(a)?.sub(&b.mul(&phi)?)?.entries().to_vec())
    })?;
    Ok(kernel_basis(&system).cols())
}

fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = &a[(i, j)] * &b[(k, l)];
                }
            }
        }
    }
    out
}

/// `dim Ext¹` over `K[X, X⁻¹]` from the free presentation
/// `0 → P → P → M_A → 0` with map `X · id − A`: the cokernel of
/// `Φ ↦ B Φ − Φ A` on `Hom_K(K^{n_A}, K^{n_B})`.
pub fn laurent_ext_dim(a: &Matrix, b: &Matrix) -> Result<usize> {
    a.field().check(b.field())?;
    check_loop("A", a)?;
    check_loop("B", b)?;
    let field = a.field();
    let (na, nb) = (a.rows(), b.rows());
    // Column-major vec: vec(BΦ − ΦA) = (I ⊗ B − Aᵀ ⊗ I) vec(Φ).
    let induced = kronecker(&Matrix::identity(field, na), b)
        .sub(&kronecker(&a.transpose(), &Matrix::identity(field, nb)))?;
    Ok(na * nb - rank(&induced))
}

/// Strips powers of `x` and rejects the zero polynomial.
fn normalize(p: &XPolynomial) -> Result<XPolynomial> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial".into()));
    }
    Ok(p.strip_x_power().1.monic())
}

/// `dim Ext¹(L_p, S_1^{⊕k}) = k · deg p`, after discarding powers of `x`.
pub fn ext_lp_s1k_dim(p: &XPolynomial, k: usize) -> Result<usize> {
    Ok(k * normalize(p)?.degree().expect("nonzero"))
}

/// `p*(T) = Σ α_i T^{n−i}` for `p = Σ α_i x^i` of degree `n`.
pub fn reversed_polynomial(p: &XPolynomial) -> XPolynomial {
    let mut c = p.coeffs().to_vec();
    c.reverse();
    XPolynomial::from_coeffs(p.field(), c)
}

/// One class in `K[T]/(p*(T))` per copy of `S_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClassVector {
    classes: Vec<XPolynomial>,
}

impl ExtClassVector {
    /// Takes the classes as given; [`build_extension`] checks they are reduced.
    pub fn new(classes: Vec<XPolynomial>) -> ExtClassVector {
        ExtClassVector { classes }
    }

    pub fn zero(field: Field, k: usize) -> ExtClassVector {
        ExtClassVector::new(vec![XPolynomial::zero(field); k])
    }

    /// Reduces arbitrary polynomials modulo `p*(T)`.
    pub fn reduced(p: &XPolynomial, raw: Vec<XPolynomial>) -> Result<ExtClassVector> {
        let modulus = reversed_polynomial(&normalize(p)?);
        let classes = raw
            .iter()
            .map(|c| Ok(c.div_rem(&modulus)?.1))
            .collect::<Result<_>>()?;
        Ok(ExtClassVector { classes })
    }

    pub fn classes(&self) -> &[XPolynomial] {
        &self.classes
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.classes.iter().all(XPolynomial::is_zero)
    }
}

/// Middle term of the extension of `L_p` by `S_1^{⊕k}` with the given class.
///
/// `F` is the companion matrix of `p` and row `i` of `E` lists the
/// coefficients of the `i`-th class against the companion basis. The zero
/// class gives the split extension `S_1^{⊕k} ⊕ L_p`.
pub fn build_extension(p: &XPolynomial, cls: &ExtClassVector) -> Result<GammaRep> {
    let q = normalize(p)?;
    let field = q.field();
    let d = q.degree().expect("nonzero");
    let k = cls.k();
    let mut e = Matrix::zeros(field, k, d);
    for (i, c) in cls.classes.iter().enumerate() {
        field.check(c.field())?;
        if c.degree().is_some_and(|deg| deg >= d) {
            return Err(Error::InvalidArgument(format!(
                "class {c} is not reduced modulo a polynomial of degree {d}"
            )));
        }
        for (j, a) in c.coeffs().iter().enumerate() {
            e[(i, j)] = a.clone();
        }
    }
    let f = if d == 0 {
        Matrix::zeros(field, 0, 0)
    } else {
        q.companion()?
    };
    GammaRep::new(field, k, d, e, f)
}

/// Whether an extension is isomorphic to `S_1^{⊕k} ⊕ L_p`.
pub fn is_split_extension(p: &XPolynomial, middle: &GammaRep) -> Result<bool> {
    let split = direct_sum(&build_s1_power(middle.field(), middle.dim_u()), &build_lp(p)?)?;
    crate::rep::is_isomorphic(middle, &split)
}

/// Whether two extensions of `L_p` by `S_1^{⊕k}` are equivalent: some module
/// map between the middle terms restricts to the identity on `S_1^{⊕k}` and
/// induces the identity on `L_p`.
pub fn extensions_equivalent(a: &GammaRep, b: &GammaRep) -> Result<bool> {
    if (a.dim_u(), a.dim_v()) != (b.dim_u(), b.dim_v()) || a.f() != b.f() {
        return Ok(false);
    }
    let field = a.field();
    let basis = hom_space(a, b)?;
    let flatten = |phi: &RepMorphism| {
        let mut v = phi.u.entries().to_vec();
        v.extend_from_slice(phi.v.entries());
        v
    };
    let target = flatten(&RepMorphism::identity(a));
    let cols: Vec<Vec<Scalar>> = basis.iter().map(flatten).collect();
    let system = Matrix::from_columns(field, target.len(), &cols);
    Ok(solve(&system, &target)?.is_some())
}

/// `dim Ext¹(M, S_1^{⊕k}) = k (dim M/IM − rank E)`: split `S_1` summands
/// contribute nothing, and what remains has `ℓ(IM) = rank E`.
pub fn ext_m_s1k_dim(rep: &GammaRep, k: usize) -> usize {
    k * (rep.dim_v() - rank(rep.e()))
}

/// Selector for the four closed formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    /// Finite-dimensional source.
    I,
    /// General pair, through `Ext¹(M/IM, N)` and `Hom_R(M, N)`.
    II,
    /// Finite-dimensional target.
    III,
    /// General pair, through `Ext¹(M, IN)` and `d(M)`.
    IV,
}

impl Formula {
    pub const ALL: [Formula; 4] = [Formula::I, Formula::II, Formula::III, Formula::IV];

    pub fn applies(&self, m: &GammaRep, n: &GammaRep) -> bool {
        match self {
            Formula::I => m.dim_u() == 0,
            Formula::III => n.dim_u() == 0,
            Formula::II | Formula::IV => true,
        }
    }

    /// The cheapest formula that applies: (i), then (iii), then (iv).
    pub fn auto(m: &GammaRep, n: &GammaRep) -> Formula {
        if Formula::I.applies(m, n) {
            Formula::I
        } else if Formula::III.applies(m, n) {
            Formula::III
        } else {
            Formula::IV
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::I => "i",
            Formula::II => "ii",
            Formula::III => "iii",
            Formula::IV => "iv",
        })
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Formula::I),
            "ii" | "2" => Ok(Formula::II),
            "iii" | "3" => Ok(Formula::III),
            "iv" | "4" => Ok(Formula::IV),
            _ => Err(Error::InvalidArgument(format!("unknown formula {s:?}"))),
        }
    }
}

fn to_count(value: i64, what: &str) -> Result<usize> {
    usize::try_from(value)
        .map_err(|_| Error::InvalidArgument(format!("{what} evaluated to {value}")))
}

/// Formula (i) for a source whose `S_1`-part is ignored: only `F_M` is used.
fn formula_i_on_top(m: &GammaRep, n: &GammaRep, budget: &Budget) -> Result<i64> {
    let lf = lf_module(n, budget)?;
    let ext_top = laurent_ext_dim(m.f(), n.f())? as i64;
    let hom_lf = laurent_hom_dim(m.f(), lf.f())? as i64;
    let hom_top = laurent_hom_dim(m.f(), n.f())? as i64;
    Ok(ext_top + (n.dim_u() * m.dim_v()) as i64 + hom_lf - hom_top)
}

/// Evaluates one closed formula for `dim Ext¹(M, N)`.
pub fn ext_dim_general(m: &GammaRep, n: &GammaRep, which: Formula, budget: &Budget) -> Result<usize> {
    m.field().check(n.field())?;
    if !which.applies(m, n) {
        return Err(Error::NotApplicable(match which {
            Formula::I => "formula (i) needs a finite-dimensional source (IM = 0)".into(),
            _ => "formula (iii) needs a finite-dimensional target (IN = 0)".into(),
        }));
    }
    let (sm, sn) = (stats(m), stats(n));
    let value = match which {
        Formula::I => formula_i_on_top(m, n, budget)?,
        Formula::II => {
            let ext_top = formula_i_on_top(&top_module(m), n, budget)?;
            let hom = hom_r_dim(m, n, budget)? as i64;
            let lf = lf_module(n, budget)?;
            let hom_lf = laurent_hom_dim(m.f(), lf.f())? as i64;
            ext_top + hom - hom_lf - (sm.ell_im * sn.ell_im) as i64
        }
        Formula::III => laurent_ext_dim(m.f(), n.f())? as i64,
        Formula::IV => {
            let ext_top = laurent_ext_dim(m.f(), n.f())? as i64;
            let ext_socle = ext_m_s1k_dim(m, sn.ell_im) as i64;
            let hom = hom_r_dim(m, n, budget)? as i64;
            let hom_top = laurent_hom_dim(m.f(), n.f())? as i64;
            ext_top + ext_socle + hom - hom_top - (sm.d_m * sn.ell_im) as i64
        }
    };
    to_count(value, &format!("formula ({which})"))
}

/// Element of `P_0 = S_1^{⊕m_u} ⊕ R^{⊕m_v}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P0Element {
    /// `(height i, k) ↦` coefficient of `y^i f_1` in the `k`-th copy of `S_1`.
    pub s: BTreeMap<(usize, usize), Scalar>,
    /// Coefficient of the `j`-th free generator `e_j`.
    pub r: Vec<AlgebraElement>,
}

impl P0Element {
    fn zero(field: Field, m_v: usize) -> P0Element {
        P0Element {
            s: BTreeMap::new(),
            r: vec![AlgebraElement::zero(field); m_v],
        }
    }

    fn add_s(&mut self, key: (usize, usize), c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.s.entry(key).or_insert_with(|| c.field().zero());
        *e += c;
        if e.is_zero() {
            self.s.remove(&key);
        }
    }

    /// `a · self`. On `S_1`, `y^p x^q · y^i f_1` is `y^{p+i−q} f_1` when
    /// `q ≤ i` and zero otherwise.
    pub fn left_mul(&self, a: &AlgebraElement) -> P0Element {
        let mut out = P0Element::zero(a.field(), self.r.len());
        for (j, r) in self.r.iter().enumerate() {
            out.r[j] = a * r;
        }
        for (&(i, k), c) in &self.s {
            for (mono, ac) in a.terms() {
                let prod = mono_mul(*mono, Monomial::new(i, 0));
                if prod.x == 0 {
                    out.add_s((prod.y, k), &(ac * c));
                }
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.s.is_empty() && self.r.iter().all(AlgebraElement::is_zero)
    }
}

/// Projective presentation of a realized module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub m_u: usize,
    pub m_v: usize,
    /// `δ(e_j)` for each generator of `P_1 = R^{⊕m_v}`.
    pub relations: Vec<P0Element>,
}

impl Presentation {
    pub fn of(rep: &GammaRep) -> Presentation {
        let field = rep.field();
        let (m_u, m_v) = (rep.dim_u(), rep.dim_v());
        let relations = (0..m_v)
            .map(|j| {
                let mut rel = P0Element::zero(field, m_v);
                rel.r[j] = AlgebraElement::y(field);
                for k in 0..m_v {
                    let c = &rep.f_inverse()[(k, j)];
                    if !c.is_zero() {
                        let t = AlgebraElement::constant(-c);
                        rel.r[k] = &rel.r[k] + &t;
                    }
                }
                for k in 0..m_u {
                    rel.add_s((0, k), &-&rep.e()[(k, j)]);
                }
                rel
            })
            .collect();
        Presentation { m_u, m_v, relations }
    }

    /// `ε: P_0 → M`, sending `f_1` in the `k`-th copy to `f_1 ⊗ u_k` and `e_j`
    /// to the basis vector `v_j` of the designated complement.
    pub fn epsilon(&self, rep: &GammaRep, a: &P0Element) -> Result<ModuleVector> {
        let field = rep.field();
        let mut out = ModuleVector::new(rep, a.s.iter().map(|(&k, c)| (k, c.clone())), vec![field.zero(); rep.dim_v()])?;
        for (j, r) in a.r.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let mut w = vec![field.zero(); rep.dim_v()];
            w[j] = field.one();
            let vj = ModuleVector::new(rep, [], w)?;
            out.axpy(&field.one(), &act_element(rep, r, &vj)?);
        }
        Ok(out)
    }

    /// Checks exactness on a window of size `w`: `ε ∘ δ = 0`, `δ` is injective
    /// on the `P_1`-window `y^a x^b e_j` (`a ≤ w`, `b ≤ w + 1`), and every
    /// element of `ker ε` supported in heights and degrees `≤ w` lies in the
    /// image of that window.
    pub fn validate(&self, rep: &GammaRep, w: usize) -> Result<()> {
        let field = rep.field();
        let bound = w + 2;
        let index = P0Index {
            m_u: self.m_u,
            bound,
        };
        let mut image = SparseEchelon::new(field);
        for (j, rel) in self.relations.iter().enumerate() {
            for a in 0..=w {
                for b in 0..=w + 1 {
                    let img = rel.left_mul(&AlgebraElement::monomial(field, a, b));
                    if !self.epsilon(rep, &img)?.is_zero() {
                        return Err(Error::Presentation(format!(
                            "epsilon does not kill y^{a} x^{b} δ(e_{j})"
                        )));
                    }
                    if !image.insert(index.sparse(&img)?) {
                        return Err(Error::Presentation(format!(
                            "relation images are dependent at y^{a} x^{b} δ(e_{j})"
                        )));
                    }
                }
            }
        }
        // Window of P_0: heights ≤ w on the S_1 side, monomials y^a x^b with
        // a, b ≤ w on the free side.
        let mut basis = Vec::new();
        for h in 0..=w {
            for k in 0..self.m_u {
                let mut e = P0Element::zero(field, self.m_v);
                e.add_s((h, k), &field.one());
                basis.push(e);
            }
        }
        for j in 0..self.m_v {
            for a in 0..=w {
                for b in 0..=w {
                    let mut e = P0Element::zero(field, self.m_v);
                    e.r[j] = AlgebraElement::monomial(field, a, b);
                    basis.push(e);
                }
            }
        }
        let target = ModuleWindow::new(rep, w + 1);
        let eps_cols = basis
            .iter()
            .map(|e| {
                let v = self.epsilon(rep, e)?;
                target
                    .coordinates(&v)
                    .ok_or_else(|| Error::Presentation("epsilon leaves the window".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let eps = Matrix::from_columns(field, target.dim(), &eps_cols);
        let ker = kernel_basis(&eps);
        for col in ker.columns() {
            let mut elem = P0Element::zero(field, self.m_v);
            for (c, e) in col.iter().zip(&basis) {
                if c.is_zero() {
                    continue;
                }
                for (key, v) in &e.s {
                    elem.add_s(*key, &(c * v));
                }
                for (j, r) in e.r.iter().enumerate() {
                    elem.r[j] = &elem.r[j] + &r.scale(c);
                }
            }
            if elem.is_zero() {
                continue;
            }
            if !image.contains(&index.sparse(&elem)?) {
                return Err(Error::Presentation(
                    "a kernel element of epsilon is not a relation".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Sparse coordinates on `P_0` for heights and degrees below `bound`.
struct P0Index {
    m_u: usize,
    bound: usize,
}

impl P0Index {
    fn sparse(&self, a: &P0Element) -> Result<SparseVec> {
        let too_big = || Error::Presentation("relation image leaves the coordinate box".into());
        let mut v = SparseVec::new();
        let s_len = self.bound * self.m_u;
        for (&(h, k), c) in &a.s {
            if h >= self.bound {
                return Err(too_big());
            }
            v.insert(h * self.m_u + k, c.clone());
        }
        for (j, r) in a.r.iter().enumerate() {
            for (mono, c) in r.terms() {
                if mono.y >= self.bound || mono.x >= self.bound {
                    return Err(too_big());
                }
                let idx = s_len + (j * self.bound + mono.y) * self.bound + mono.x;
                v.insert(idx, c.clone());
            }
        }
        Ok(v)
    }
}

/// Hom and Ext¹ dimensions read off the presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleDims {
    pub hom: usize,
    pub ext: usize,
}

const PRESENTATION_CHECK_WINDOW: usize = 2;

/// `Hom(P_0, N) → Hom(P_1, N)` on the window of height `h` of `N`.
///
/// A map out of `P_0` is a choice of `n_k ∈ f_1 N` per copy of `S_1` and of
/// `n_j ∈ N` per free generator; it is sent to the values on the relations.
fn oracle_window(pres: &Presentation, n: &GammaRep, h: usize) -> Result<OracleDims> {
    let field = n.field();
    let lift = pres
        .relations
        .iter()
        .flat_map(|r| r.r.iter().map(AlgebraElement::max_y).chain(r.s.keys().map(|&(i, _)| i)))
        .max()
        .unwrap_or(0);
    let h = h.max(lift);
    let target = ModuleWindow::new(n, h);
    let source = ModuleWindow::new(n, h - lift);
    // f_1 N inside the window: the fixed vectors of f_1.
    let f1 = idempotent_f(field, 1)?;
    let fixed = matrix_of(field, target.dim(), target.dim(), |c| {
        let m = target.vector(n, c);
        let image = act_element(n, &f1, &m)?.sub(&m);
        Ok(target.coordinates(&image).expect("f_1 does not raise heights"))
    })?;
    let socle = kernel_basis(&fixed);
    let socle_vectors: Vec<ModuleVector> = socle
        .columns()
        .iter()
        .map(|c| target.vector(n, c))
        .collect();

    let n_s = socle_vectors.len();
    let n_in = pres.m_u * n_s + pres.m_v * source.dim();
    let n_out = pres.m_v * target.dim();
    let map = matrix_of(field, n_in, n_out, |c| {
        let socle_images: Vec<ModuleVector> = (0..pres.m_u)
            .map(|k| {
                let mut m = ModuleVector::zero(n);
                for (t, sv) in socle_vectors.iter().enumerate() {
                    m.axpy(&c[k * n_s + t], sv);
                }
                m
            })
            .collect();
        let offset = pres.m_u * n_s;
        let free_images: Vec<ModuleVector> = (0..pres.m_v)
            .map(|j| {
                let start = offset + j * source.dim();
                source.vector(n, &c[start..start + source.dim()])
            })
            .collect();
        let mut out = Vec::with_capacity(n_out);
        for rel in &pres.relations {
            let mut value = ModuleVector::zero(n);
            for (j, r) in rel.r.iter().enumerate() {
                if !r.is_zero() && !free_images[j].is_zero() {
                    value.axpy(&field.one(), &act_element(n, r, &free_images[j])?);
                }
            }
            for (&(i, k), coeff) in &rel.s {
                if socle_images[k].is_zero() {
                    continue;
                }
                let lifted = act_element(n, &AlgebraElement::monomial(field, i, 0), &socle_images[k])?;
                value.axpy(coeff, &lifted);
            }
            out.extend(target.coordinates(&value).expect("relations respect the window"));
        }
        Ok(out)
    })?;
    let r = rank(&map);
    Ok(OracleDims {
        hom: n_in - r,
        ext: n_out - r,
    })
}

/// Hom and Ext¹ from the presentation of `m`, certified over doubling windows.
/// The presentation is checked for exactness on a window before use.
pub fn oracle_dims(m: &GammaRep, n: &GammaRep, budget: &Budget) -> Result<OracleDims> {
    m.field().check(n.field())?;
    let pres = Presentation::of(m);
    pres.validate(m, PRESENTATION_CHECK_WINDOW)?;
    let h0 = budget.initial.map_or(2, |(y, _)| y.max(1));
    certify("Hom/Ext window", budget, |level| {
        oracle_window(&pres, n, h0 << level).map(Some)
    })
}

/// `dim Hom_R(M, N)` of the realized modules.
pub fn hom_r_dim(m: &GammaRep, n: &GammaRep, budget: &Budget) -> Result<usize> {
    Ok(oracle_dims(m, n, budget)?.hom)
}

/// `dim Ext¹_R(M, N)` of the realized modules, independent of the formulas.
pub fn ext_oracle(m: &GammaRep, n: &GammaRep, budget: &Budget) -> Result<usize> {
    Ok(oracle_dims(m, n, budget)?.ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{hom_dim_d, is_isomorphic, random_invertible};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rationals
    }

    fn f5() -> Field {
        Field::Prime(5)
    }

    fn poly(field: Field, c: &[i64]) -> XPolynomial {
        XPolynomial::from_i64(field, c)
    }

    fn rep(field: Field, du: usize, dv: usize, e: &[i64], f: &[i64]) -> GammaRep {
        GammaRep::new(field, du, dv, Matrix::from_i64(field, du, dv, e), Matrix::from_i64(field, dv, dv, f)).unwrap()
    }

    fn lp(field: Field, c: &[i64]) -> GammaRep {
        build_lp(&poly(field, c)).unwrap()
    }

    fn s1k(field: Field, k: usize) -> GammaRep {
        build_s1_power(field, k)
    }

    fn budget() -> Budget {
        Budget::default()
    }

    /// Euler characteristic of the presentation: Hom − Ext¹ is
    /// `dim_u(M) dim_u(N) − dim_v(M) dim_u(N)`, and Hom agrees with the
    /// representation-side Hom.
    fn ext_closed_form(m: &GammaRep, n: &GammaRep) -> usize {
        let hom = hom_dim_d(m, n).unwrap() as i64;
        let value = (m.dim_v() * n.dim_u()) as i64 - (m.dim_u() * n.dim_u()) as i64 + hom;
        usize::try_from(value).unwrap()
    }

    #[test]
    fn laurent_examples() {
        let one = Matrix::from_i64(q(), 1, 1, &[1]);
        let two = Matrix::from_i64(q(), 1, 1, &[2]);
        assert_eq!(laurent_hom_dim(&one, &one).unwrap(), 1);
        assert_eq!(laurent_hom_dim(&one, &two).unwrap(), 0);
        let a = poly(q(), &[-1, 0, 1]).companion().unwrap();
        assert_eq!(laurent_hom_dim(&a, &one).unwrap(), 1);
        assert_eq!(laurent_ext_dim(&one, &one).unwrap(), 1);
        assert_eq!(laurent_ext_dim(&one, &two).unwrap(), 0);
        let c = poly(q(), &[1, 1, 1]).companion().unwrap();
        assert_eq!(laurent_ext_dim(&c, &c).unwrap(), 2);
        let singular = Matrix::from_i64(q(), 1, 1, &[0]);
        assert!(matches!(laurent_hom_dim(&singular, &one), Err(Error::Singular(_))));
        assert!(matches!(laurent_ext_dim(&one, &singular), Err(Error::Singular(_))));
    }

    /// Cyclic modules `K[X]/(f)`, `K[X]/(g)`: both dimensions are `deg gcd(f, g)`.
    #[test]
    fn laurent_dims_match_gcd_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for field in [q(), f5()] {
            for _ in 0..25 {
                let f = random_unit_free(field, &mut rng);
                let g = random_unit_free(field, &mut rng);
                let expected = f.gcd(&g).degree().unwrap();
                let (a, b) = (f.companion().unwrap(), g.companion().unwrap());
                assert_eq!(laurent_hom_dim(&a, &b).unwrap(), expected);
                assert_eq!(laurent_ext_dim(&a, &b).unwrap(), expected);
            }
        }
    }

    /// Random polynomial of degree 1..=3 with nonzero constant term, sometimes
    /// sharing a factor with others.
    fn random_unit_free(field: Field, rng: &mut ChaCha8Rng) -> XPolynomial {
        let shared = poly(field, &[-1, 1]);
        loop {
            let d = rng.gen_range(1..=3);
            let mut c: Vec<Scalar> = (0..d).map(|_| field.random(rng, 2)).collect();
            c.push(field.one());
            let p = XPolynomial::from_coeffs(field, c);
            let p = if rng.gen_bool(0.4) { p.mul(&shared) } else { p };
            if !p.coeff(0).is_zero() {
                return p;
            }
        }
    }

    #[test]
    fn ext_of_lp_by_s1_powers() {
        assert_eq!(ext_lp_s1k_dim(&poly(q(), &[-1, 1]), 1).unwrap(), 1);
        assert_eq!(ext_lp_s1k_dim(&poly(q(), &[1, 1, 1]), 2).unwrap(), 4);
        assert_eq!(ext_lp_s1k_dim(&poly(q(), &[1, 1, 1]), 0).unwrap(), 0);
        assert!(ext_lp_s1k_dim(&XPolynomial::zero(q()), 1).is_err());
    }

    #[test]
    fn extension_examples() {
        let p = poly(q(), &[-1, 1]);
        let split = build_extension(&p, &ExtClassVector::zero(q(), 1)).unwrap();
        assert!(is_split_extension(&p, &split).unwrap());
        let ns = build_extension(&p, &ExtClassVector::new(vec![poly(q(), &[1])])).unwrap();
        assert_eq!(ns, rep(q(), 1, 1, &[1], &[1]));
        assert_eq!(stats(&ns).d_m, 0);
        assert!(!is_split_extension(&p, &ns).unwrap());
        let unreduced = ExtClassVector::new(vec![poly(q(), &[0, 1])]);
        assert!(build_extension(&p, &unreduced).is_err());
        let reduced = ExtClassVector::reduced(&p, vec![poly(q(), &[0, 1])]).unwrap();
        assert!(reduced.classes()[0].degree().unwrap_or(0) < 1);
    }

    #[test]
    fn middle_terms_over_f2() {
        let f2 = Field::Prime(2);
        let p = poly(f2, &[-1, 1]);
        let middles: Vec<GammaRep> = f2
            .elements()
            .unwrap()
            .into_iter()
            .map(|c| build_extension(&p, &ExtClassVector::new(vec![XPolynomial::from_coeffs(f2, vec![c])])).unwrap())
            .collect();
        let mut classes: Vec<GammaRep> = Vec::new();
        for m in middles {
            if !classes.iter().any(|c| is_isomorphic(c, &m).unwrap()) {
                classes.push(m);
            }
        }
        assert_eq!(classes.len(), 2);
    }

    /// Every row vector `E ∈ F_2^{1×d}` against the companion of `p`; counts
    /// equivalence classes of extensions.
    #[test]
    fn extension_classes_over_f2() {
        let f2 = Field::Prime(2);
        for coeffs in [&[1, 1][..], &[1, 1, 1], &[1, 0, 1]] {
            let p = poly(f2, coeffs);
            let d = p.degree().unwrap();
            let reps: Vec<GammaRep> = (0..1u32 << d)
                .map(|bits| {
                    let row: Vec<i64> = (0..d).map(|i| ((bits >> i) & 1) as i64).collect();
                    let e = Matrix::from_i64(f2, 1, d, &row);
                    GammaRep::new(f2, 1, d, e, p.companion().unwrap()).unwrap()
                })
                .collect();
            let mut reps_of_classes: Vec<&GammaRep> = Vec::new();
            for r in &reps {
                if !reps_of_classes.iter().any(|c| extensions_equivalent(c, r).unwrap()) {
                    reps_of_classes.push(r);
                }
            }
            assert_eq!(reps_of_classes.len(), 1 << d);
        }
    }

    #[test]
    fn ext_into_socle_examples() {
        assert_eq!(ext_m_s1k_dim(&lp(q(), &[1, 1, 1]), 1), 2);
        assert_eq!(ext_m_s1k_dim(&rep(q(), 1, 2, &[1, 0], &[1, 0, 0, 1]), 1), 1);
        assert_eq!(ext_m_s1k_dim(&s1k(q(), 3), 2), 0);
    }

    #[test]
    fn formula_examples() {
        let b = budget();
        let one = lp(q(), &[-1, 1]);
        let ns = rep(q(), 1, 1, &[1], &[1]);
        assert_eq!(ext_dim_general(&one, &s1k(q(), 1), Formula::I, &b).unwrap(), 1);
        assert_eq!(ext_dim_general(&ns, &one, Formula::III, &b).unwrap(), 1);
        assert_eq!(ext_dim_general(&ns, &s1k(q(), 1), Formula::II, &b).unwrap(), 0);
        assert!(matches!(
            ext_dim_general(&ns, &s1k(q(), 1), Formula::I, &b),
            Err(Error::NotApplicable(_))
        ));
        assert!(matches!(
            ext_dim_general(&one, &ns, Formula::III, &b),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn hom_oracle_examples() {
        let b = budget();
        assert_eq!(hom_r_dim(&s1k(q(), 1), &s1k(q(), 1), &b).unwrap(), 1);
        assert_eq!(hom_r_dim(&lp(q(), &[-1, 1]), &s1k(q(), 1), &b).unwrap(), 0);
        assert_eq!(hom_r_dim(&s1k(q(), 1), &lp(q(), &[1, 1, 1]), &b).unwrap(), 0);
        assert_eq!(hom_r_dim(&rep(q(), 1, 1, &[1], &[1]), &s1k(q(), 1), &b).unwrap(), 0);
    }

    #[test]
    fn ext_oracle_examples() {
        let b = budget();
        assert_eq!(ext_oracle(&lp(q(), &[-1, 1]), &s1k(q(), 1), &b).unwrap(), 1);
        assert_eq!(ext_oracle(&s1k(q(), 2), &lp(q(), &[-1, 1]), &b).unwrap(), 0);
        assert_eq!(ext_oracle(&s1k(q(), 2), &rep(q(), 1, 1, &[1], &[1]), &b).unwrap(), 0);
        assert_eq!(ext_oracle(&rep(q(), 1, 2, &[1, 0], &[1, 0, 0, 1]), &s1k(q(), 1), &b).unwrap(), 1);
    }

    #[test]
    fn oracle_zero_budget_fails() {
        let r = ext_oracle(&lp(q(), &[-1, 1]), &s1k(q(), 1), &Budget::with_doublings(0));
        assert!(matches!(r, Err(Error::NonStabilization { .. })));
    }

    #[test]
    fn presentation_is_exact_on_windows() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let r = GammaRep::random(f5(), &mut rng, 3);
            Presentation::of(&r).validate(&r, 3).unwrap();
        }
    }

    #[test]
    fn broken_presentation_is_rejected() {
        let r = rep(q(), 1, 1, &[1], &[2]);
        let mut pres = Presentation::of(&r);
        pres.relations[0].s.clear();
        assert!(matches!(pres.validate(&r, 2), Err(Error::Presentation(_))));
    }

    #[test]
    fn oracle_matches_socle_formula_f5() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let mut r = GammaRep::random(f5(), &mut rng, 4);
            if rng.gen_bool(0.3) {
                r = direct_sum(&s1k(f5(), 1), &r).unwrap();
            }
            for k in 1..=2 {
                assert_eq!(ext_m_s1k_dim(&r, k), ext_oracle(&r, &s1k(f5(), k), &budget()).unwrap());
            }
        }
    }

    #[test]
    fn hom_r_agrees_with_representation_hom() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let m = GammaRep::random(f5(), &mut rng, 3);
            let n = GammaRep::random(f5(), &mut rng, 3);
            let dims = oracle_dims(&m, &n, &budget()).unwrap();
            assert_eq!(dims.hom, hom_dim_d(&m, &n).unwrap());
            assert_eq!(dims.ext, ext_closed_form(&m, &n));
        }
    }

    #[test]
    fn formulas_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let m = GammaRep::random(f5(), &mut rng, 3);
            let n = GammaRep::random(f5(), &mut rng, 3);
            let oracle = ext_oracle(&m, &n, &budget()).unwrap();
            for which in Formula::ALL {
                if which.applies(&m, &n) {
                    assert_eq!(ext_dim_general(&m, &n, which, &budget()).unwrap(), oracle, "formula {which}");
                }
            }
        }
    }

    #[test]
    fn finite_dimensional_pairs_reduce_to_laurent() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let (dm, dn) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let m = GammaRep::random_with_dims(q(), &mut rng, 0, dm);
            let n = GammaRep::random_with_dims(q(), &mut rng, 0, dn);
            assert_eq!(ext_oracle(&m, &n, &budget()).unwrap(), laurent_ext_dim(m.f(), n.f()).unwrap());
        }
    }

    #[test]
    fn p_star_generates_p_plus_socle() {
        use crate::algebra::p_star;
        use crate::ideal::{span_echelon, TruncationWindow};
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let p = random_unit_free(q(), &mut rng);
            let n = p.degree().unwrap();
            let star = p_star(&p).unwrap();
            let w = TruncationWindow::new(n + 8, 8);
            let span = span_echelon(&[star], q(), w).unwrap();
            for k in 1..=6 {
                let fk = idempotent_f(q(), k).unwrap();
                assert!(span.contains(&w.coordinates(&fk)), "f_{k} for p = {p}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn ext_is_additive(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = GammaRep::random(f5(), &mut rng, 2);
            let b = GammaRep::random(f5(), &mut rng, 2);
            let n = GammaRep::random(f5(), &mut rng, 2);
            let sum = direct_sum(&a, &b).unwrap();
            let e = |m: &GammaRep, n: &GammaRep| ext_oracle(m, n, &budget()).unwrap();
            prop_assert_eq!(e(&sum, &n), e(&a, &n) + e(&b, &n));
            prop_assert_eq!(e(&n, &sum), e(&n, &a) + e(&n, &b));
        }

        #[test]
        fn ext_is_iso_invariant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = GammaRep::random(f5(), &mut rng, 3);
            let n = GammaRep::random(f5(), &mut rng, 3);
            let pu = random_invertible(f5(), &mut rng, m.dim_u());
            let pv = random_invertible(f5(), &mut rng, m.dim_v());
            let m2 = m.conjugate(&pu, &pv).unwrap();
            prop_assert_eq!(oracle_dims(&m, &n, &budget()).unwrap(), oracle_dims(&m2, &n, &budget()).unwrap());
        }

        #[test]
        fn zero_class_splits(seed in any::<u64>(), k in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_unit_free(f5(), &mut rng);
            let m = build_extension(&p, &ExtClassVector::zero(f5(), k)).unwrap();
            prop_assert!(is_split_extension(&p, &m).unwrap());
        }

        #[test]
        fn nonzero_class_does_not_split(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_unit_free(f5(), &mut rng);
            let d = p.degree().unwrap();
            let mut c: Vec<Scalar> = (0..d).map(|_| f5().random(&mut rng, 2)).collect();
            if c.iter().all(Scalar::is_zero) {
                c[0] = f5().one();
            }
            let cls = ExtClassVector::new(vec![XPolynomial::from_coeffs(f5(), c)]);
            let m = build_extension(&p, &cls).unwrap();
            prop_assert!(!is_split_extension(&p, &m).unwrap());
        }
    }
}
