//! The `tjk` command line.
//!
//! Exit codes: `0` success, `1` bad input (parse error, bad module spec,
//! singular loop map, inapplicable formula), `2` a windowed computation did
//! not stabilize within the budget, `3` a formula disagreed with its oracle,
//! `4` a self-test check failed.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{idempotent_f, p_star, AlgebraElement};
use crate::certify::{Budget, DEFAULT_BUDGET};
use crate::error::Error;
use crate::homology::{
    build_extension, ext_dim_general, ext_oracle, is_split_extension, oracle_dims, ExtClassVector,
    Formula,
};
use crate::ideal::{canonical_form, member, span_echelon, IdealCanonicalForm, TruncationWindow};
use crate::linalg::Matrix;
use crate::parser::{format, parse};
use crate::poly::XPolynomial;
use crate::rep::{build_lp, build_s1_power, hom_dim_d, roundtrip, stats, xi_extract, GammaRep};
use crate::repfile::{parse_rep, RepFile};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Parser)]
#[command(name = "tjk", version, about = "Exact computations in K<x,y>/(xy-1)")]
pub struct Cli {
    /// Coefficient field: `Q` or `Fp:<prime>`.
    #[arg(long, global = true, env = "TJK_FIELD", default_value = "Q")]
    pub field: String,
    /// Initial window as `max_y,max_x`.
    #[arg(long, global = true, value_parser = parse_window)]
    pub window: Option<(usize, usize)>,
    /// Number of window doublings allowed.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cross-check results against an independent computation.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Canonical form of the left ideal generated by the expressions.
    Ideal {
        #[arg(required = true, allow_hyphen_values = true)]
        generators: Vec<String>,
    },
    /// Decide whether an element lies in a left ideal.
    Member {
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(required = true, allow_hyphen_values = true)]
        generators: Vec<String>,
    },
    /// Dimension of Ext^1(M, N). Modules are rep files, `Lp:<poly>` or `S1^k`.
    Ext {
        source: String,
        target: String,
        /// auto, i, ii, iii, iv, or oracle.
        #[arg(long, default_value = "auto")]
        formula: String,
    },
    /// Dimension of Hom_R(M, N).
    Hom { source: String, target: String },
    /// Realize a representation as a module and read it back.
    Functor {
        module: String,
        /// Also search for an isomorphism back to the input.
        #[arg(long)]
        roundtrip: bool,
    },
    /// Run the invariant suite at reduced sample counts.
    Selftest,
}

fn parse_window(text: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected max_y,max_x, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Resolved settings shared by every verb.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub field: Field,
    pub budget: Budget,
    pub json: bool,
    pub verify: bool,
}

enum Failure {
    Input(Error),
    Disagreement(String),
    SelftestFailed(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(Error::NonStabilization { .. }) => 2,
            Failure::Input(Error::Presentation(_)) => 3,
            Failure::Input(_) => 1,
            Failure::Disagreement(_) => 3,
            Failure::SelftestFailed(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(e) => format!("error: {e}"),
            Failure::Disagreement(m) => format!("disagreement: {m}"),
            Failure::SelftestFailed(names) => format!("self-test failed: {}", names.join(", ")),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let field = match cli.field.parse::<Field>() {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let config = SessionConfig {
        field,
        budget: Budget {
            doublings: cli.budget,
            initial: cli.window,
        },
        json: cli.json,
        verify: cli.verify,
    };
    match dispatch(&cli.command, &config, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message());
            f.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cmd: &Command, cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Normalize { expr } => cmd_normalize(expr, cfg, out),
        Command::Ideal { generators } => cmd_ideal(generators, cfg, out),
        Command::Member { element, generators } => cmd_member(element, generators, cfg, out),
        Command::Ext {
            source,
            target,
            formula,
        } => cmd_ext(source, target, formula, cfg, out),
        Command::Hom { source, target } => cmd_hom(source, target, cfg, out),
        Command::Functor { module, roundtrip } => cmd_functor(module, *roundtrip, cfg, out),
        Command::Selftest => cmd_selftest(cfg, out),
    }
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> CliResult {
    writeln!(out, "{text}").map_err(|e| Failure::Input(Error::InvalidArgument(format!("write failed: {e}"))))
}

fn terms_json(a: &AlgebraElement) -> Value {
    Value::Array(
        a.terms()
            .iter()
            .map(|(m, c)| json!([m.y, m.x, c.to_string()]))
            .collect(),
    )
}

fn cmd_normalize(expr: &str, cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let a = parse(expr, cfg.field)?;
    if cfg.json {
        emit(out, json!({"normal_form": format(&a), "terms": terms_json(&a)}))
    } else {
        emit(out, format(&a))
    }
}

fn parse_all(exprs: &[String], field: Field) -> std::result::Result<Vec<AlgebraElement>, Failure> {
    Ok(exprs.iter().map(|e| parse(e, field)).collect::<crate::Result<Vec<_>>>()?)
}

fn scalars_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect())
}

fn ideal_json(form: &IdealCanonicalForm) -> Value {
    json!({
        "p": scalars_json(form.p.coeffs()),
        "L": Value::Array(form.l.columns().iter().map(|c| scalars_json(c)).collect()),
        "unit": form.is_unit(),
        "semisimple": form.is_semisimple(),
    })
}

fn cmd_ideal(exprs: &[String], cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let gens = parse_all(exprs, cfg.field)?;
    let form = canonical_form(&gens, &cfg.budget)?;
    if cfg.verify {
        let again = canonical_form(&form.generators(), &cfg.budget)?;
        if again != form {
            return Err(Failure::Disagreement(format!(
                "canonical form is not a fixpoint: {form} vs {again}"
            )));
        }
    }
    if cfg.json {
        return emit(out, ideal_json(&form));
    }
    let l_text = if form.l.cols() == 0 {
        "(none)".to_string()
    } else {
        form.socle_generators()
            .iter()
            .map(format)
            .collect::<Vec<_>>()
            .join(", ")
    };
    emit(out, format_args!("p = {}", form.p))?;
    emit(out, format_args!("L = {l_text}"))?;
    emit(out, format_args!("unit: {}", form.is_unit()))?;
    emit(out, format_args!("semisimple: {}", form.is_semisimple()))
}

fn cmd_member(element: &str, exprs: &[String], cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let e = parse(element, cfg.field)?;
    let gens = parse_all(exprs, cfg.field)?;
    let answer = member(&e, &gens, &cfg.budget)?;
    if cfg.json {
        emit(out, json!({ "member": answer }))
    } else {
        emit(out, answer)
    }
}

/// `S1`, `S1^k`, `Lp:<poly>`, or a path to a rep file.
pub fn parse_module_spec(spec: &str, field: Field) -> crate::Result<GammaRep> {
    if let Some(rest) = spec.strip_prefix("S1") {
        let k = match rest.strip_prefix('^') {
            Some(k) => k
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad exponent in {spec:?}")))?,
            None if rest.is_empty() => 1,
            None => return Err(Error::InvalidArgument(format!("bad module spec {spec:?}"))),
        };
        return Ok(build_s1_power(field, k));
    }
    if let Some(poly) = spec.strip_prefix("Lp:") {
        let p = parse(poly, field)?
            .as_x_polynomial()
            .ok_or_else(|| Error::InvalidArgument(format!("{poly:?} is not a polynomial in x")))?;
        return build_lp(&p);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::InvalidArgument(format!("cannot read module spec {spec:?}: {e}")))?;
    let rep = parse_rep(&text)?;
    field.check(rep.field())?;
    Ok(rep)
}

fn cmd_ext(source: &str, target: &str, formula: &str, cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let m = parse_module_spec(source, cfg.field)?;
    let n = parse_module_spec(target, cfg.field)?;
    let (label, value) = match formula {
        "oracle" => ("oracle".to_string(), ext_oracle(&m, &n, &cfg.budget)?),
        "auto" => {
            let which = Formula::auto(&m, &n);
            (which.to_string(), ext_dim_general(&m, &n, which, &cfg.budget)?)
        }
        other => {
            let which: Formula = other.parse()?;
            (which.to_string(), ext_dim_general(&m, &n, which, &cfg.budget)?)
        }
    };
    let oracle = if cfg.verify {
        Some(ext_oracle(&m, &n, &cfg.budget)?)
    } else {
        None
    };
    if cfg.json {
        let mut v = json!({"dimension": value, "formula": label});
        if let Some(o) = oracle {
            v["oracle"] = json!(o);
            v["agree"] = json!(o == value);
        }
        emit(out, v)?;
    } else {
        emit(out, value)?;
        if let Some(o) = oracle {
            emit(out, format_args!("oracle: {o} (agree: {})", o == value))?;
        }
    }
    match oracle {
        Some(o) if o != value => Err(Failure::Disagreement(format!(
            "formula ({label}) gives {value}, oracle gives {o}"
        ))),
        _ => Ok(()),
    }
}

fn cmd_hom(source: &str, target: &str, cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let m = parse_module_spec(source, cfg.field)?;
    let n = parse_module_spec(target, cfg.field)?;
    let hom = oracle_dims(&m, &n, &cfg.budget)?.hom;
    let rep_side = if cfg.verify { Some(hom_dim_d(&m, &n)?) } else { None };
    if cfg.json {
        let mut v = json!({ "dimension": hom });
        if let Some(d) = rep_side {
            v["representation_hom"] = json!(d);
            v["agree"] = json!(d == hom);
        }
        emit(out, v)?;
    } else {
        emit(out, hom)?;
        if let Some(d) = rep_side {
            emit(out, format_args!("representation hom: {d} (agree: {})", d == hom))?;
        }
    }
    match rep_side {
        Some(d) if d != hom => Err(Failure::Disagreement(format!(
            "module hom has dimension {hom}, representation hom {d}"
        ))),
        _ => Ok(()),
    }
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| scalars_json(&m.row(r))).collect())
}

fn cmd_functor(spec: &str, with_roundtrip: bool, cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let rep = parse_module_spec(spec, cfg.field)?;
    let s = stats(&rep);
    if !with_roundtrip {
        let back = xi_extract(&rep)?;
        if cfg.json {
            return emit(out, json!({
                "extracted": serde_json::to_value(RepFile::from_rep(&back)).expect("plain data"),
                "ell_IM": s.ell_im, "dim_M_mod_IM": s.dim_m_mod_im, "d_M": s.d_m,
            }));
        }
        emit(out, format_args!("extracted: {}", RepFile::from_rep(&back).to_json()))?;
        return emit(out, format_args!("ell(IM) = {}, dim M/IM = {}, d(M) = {}", s.ell_im, s.dim_m_mod_im, s.d_m));
    }
    let (back, witness) = roundtrip(&rep)?;
    if cfg.json {
        let mut v = json!({
            "extracted": serde_json::to_value(RepFile::from_rep(&back)).expect("plain data"),
            "isomorphic": witness.is_some(),
        });
        if let Some(w) = &witness {
            v["witness"] = json!({"u": matrix_json(&w.u), "v": matrix_json(&w.v)});
        }
        emit(out, v)?;
    } else {
        emit(out, format_args!("extracted: {}", RepFile::from_rep(&back).to_json()))?;
        match &witness {
            Some(w) => emit(out, format_args!("isomorphic: yes (witness u = {:?}, v = {:?})", w.u, w.v))?,
            None => emit(out, "isomorphic: no witness found")?,
        }
    }
    if witness.is_none() {
        return Err(Failure::Disagreement("round trip produced no isomorphism".into()));
    }
    Ok(())
}

type Check = fn(Field, &Budget) -> crate::Result<Option<String>>;

const SELFTEST_CHECKS: [(&str, Check); 9] = [
    ("algebra identities", check_identities),
    ("socle splitting of R", check_splitting),
    ("parser round trip", check_parser),
    ("ideal canonical form", check_ideals),
    ("window decomposition", check_decomposition),
    ("functor round trip", check_functors),
    ("Ext of L_p by S_1^k", check_ext_lp),
    ("formulas against oracle", check_formulas),
    ("extension splitting", check_extensions),
];

fn cmd_selftest(cfg: &SessionConfig, out: &mut dyn Write) -> CliResult {
    let mut failed = Vec::new();
    let mut unstable = None;
    let mut report = Vec::new();
    for (name, check) in SELFTEST_CHECKS {
        let (status, detail) = match check(cfg.field, &cfg.budget) {
            Ok(None) => ("pass", None),
            Ok(Some(why)) => {
                failed.push(name.to_string());
                ("fail", Some(why))
            }
            Err(e @ Error::NonStabilization { .. }) => {
                unstable.get_or_insert_with(|| e.clone());
                ("unstable", Some(e.to_string()))
            }
            Err(e) => {
                failed.push(name.to_string());
                ("fail", Some(e.to_string()))
            }
        };
        report.push((name, status, detail));
    }
    if cfg.json {
        let checks: Vec<Value> = report
            .iter()
            .map(|(n, s, d)| json!({"name": n, "status": s, "detail": d}))
            .collect();
        emit(out, json!({"field": cfg.field.to_string(), "checks": checks}))?;
    } else {
        for (n, s, d) in &report {
            match d {
                Some(d) => emit(out, format_args!("{} {n}: {d}", s.to_uppercase()))?,
                None => emit(out, format_args!("{} {n}", s.to_uppercase()))?,
            }
        }
    }
    if !failed.is_empty() {
        return Err(Failure::SelftestFailed(failed));
    }
    if let Some(e) = unstable {
        return Err(Failure::Input(e));
    }
    Ok(())
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x7e57 ^ tag)
}

fn fail(why: impl Into<String>) -> crate::Result<Option<String>> {
    Ok(Some(why.into()))
}

fn random_poly(field: Field, rng: &mut ChaCha8Rng, max_deg: usize) -> XPolynomial {
    use rand::Rng;
    let d = rng.gen_range(1..=max_deg);
    let mut c: Vec<Scalar> = (0..d).map(|_| field.random(rng, 3)).collect();
    c.push(field.random_nonzero(rng, 3));
    XPolynomial::from_coeffs(field, c)
}

fn check_identities(field: Field, _: &Budget) -> crate::Result<Option<String>> {
    let (x, y) = (AlgebraElement::x(field), AlgebraElement::y(field));
    let one = AlgebraElement::one(field);
    if &x * &y != one || &y * &x == one {
        return fail("xy = 1 and yx != 1");
    }
    for m in 1..=5 {
        let fm = idempotent_f(field, m)?;
        for n in 1..=5 {
            let fn_ = idempotent_f(field, n)?;
            let expected = if m == n { fm.clone() } else { AlgebraElement::zero(field) };
            if &fm * &fn_ != expected {
                return fail(format!("f_{m} f_{n}"));
            }
        }
    }
    let f1 = idempotent_f(field, 1)?;
    for i in 0..=4u32 {
        let xi = x.pow(i);
        if &f1 * &xi != &xi * &idempotent_f(field, i as usize + 1)? {
            return fail(format!("f_1 x^{i}"));
        }
    }
    let mut rng = rng(1);
    for _ in 0..10 {
        let p = random_poly(field, &mut rng, 4);
        let n = p.degree().unwrap();
        let star = p_star(&p)?;
        if &x.pow(n as u32) * &star != AlgebraElement::from_x_polynomial(&p) {
            return fail(format!("x^n p* for p = {p}"));
        }
        if &f1 * &star != f1.scale(p.leading().unwrap()) {
            return fail(format!("f_1 p* for p = {p}"));
        }
    }
    Ok(None)
}

fn check_splitting(field: Field, _: &Budget) -> crate::Result<Option<String>> {
    let (x, y) = (AlgebraElement::x(field), AlgebraElement::y(field));
    let f1 = idempotent_f(field, 1)?;
    let mut rng = rng(2);
    for _ in 0..20 {
        let r = AlgebraElement::random(field, &mut rng, 4, 5);
        if &(&r * &f1) + &(&(&r * &y) * &x) != r {
            return fail(format!("r = {r}"));
        }
        let s = &AlgebraElement::random(field, &mut rng, 4, 5) * &f1;
        let t = AlgebraElement::random(field, &mut rng, 4, 5);
        let joined = &s + &(&t * &x);
        if &joined * &f1 != s || &joined * &y != t {
            return fail(format!("inverse fails on ({s}, {t})"));
        }
    }
    Ok(None)
}

fn check_parser(field: Field, _: &Budget) -> crate::Result<Option<String>> {
    let mut rng = rng(3);
    for _ in 0..50 {
        let a = AlgebraElement::random(field, &mut rng, 5, 5);
        if parse(&format(&a), field)? != a {
            return fail(format(&a));
        }
    }
    for (bad, offset) in [("x^-1", 2), ("x +", 3), ("", 0), ("2z", 1)] {
        match parse(bad, field) {
            Err(Error::Parse { offset: o, .. }) if o == offset => {}
            other => return fail(format!("{bad:?} gave {other:?}")),
        }
    }
    Ok(None)
}

fn check_ideals(field: Field, budget: &Budget) -> crate::Result<Option<String>> {
    let mut rng = rng(4);
    for _ in 0..8 {
        let gens: Vec<AlgebraElement> = (0..2)
            .map(|_| AlgebraElement::random(field, &mut rng, 3, 3))
            .collect();
        let form = canonical_form(&gens, budget)?;
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let combo = &shuffled[0] + &shuffled[1];
        shuffled.push(combo);
        if canonical_form(&shuffled, budget)? != form {
            return fail("generator shuffling changed the form");
        }
        if canonical_form(&form.generators(), budget)? != form {
            return fail("form is not a fixpoint");
        }
        if let Some(d) = form.p.degree() {
            if form.l.cols() > d {
                return fail("L exceeds deg p");
            }
        }
    }
    Ok(None)
}

fn check_decomposition(field: Field, _: &Budget) -> crate::Result<Option<String>> {
    for d in 1..=3 {
        let w = TruncationWindow::new(2 * d + 2, 2 * d + 2);
        let socles: Vec<AlgebraElement> = (1..=d).map(|i| idempotent_f(field, i)).collect::<crate::Result<_>>()?;
        let xd = AlgebraElement::monomial(field, 0, d);
        let s = span_echelon(&socles, field, w)?;
        let t = span_echelon(std::slice::from_ref(&xd), field, w)?;
        let mut all = socles.clone();
        all.push(xd);
        let sum = span_echelon(&all, field, w)?;
        if sum.rank() != s.rank() + t.rank() {
            return fail(format!("sum is not direct for d = {d}"));
        }
        let inner = TruncationWindow::new(d, d);
        for idx in 0..inner.dim() {
            let m = inner.monomial(idx);
            let e = AlgebraElement::monomial(field, m.y, m.x);
            if !sum.contains(&w.coordinates(&e)) {
                return fail(format!("{e} missing for d = {d}"));
            }
        }
    }
    Ok(None)
}

fn check_functors(field: Field, _: &Budget) -> crate::Result<Option<String>> {
    let mut rng = rng(6);
    for _ in 0..10 {
        let r = GammaRep::random(field, &mut rng, 3);
        if roundtrip(&r)?.1.is_none() {
            return fail(format!("no witness for {}", RepFile::from_rep(&r).to_json()));
        }
    }
    Ok(None)
}

fn check_ext_lp(field: Field, budget: &Budget) -> crate::Result<Option<String>> {
    for coeffs in [&[-1, 1][..], &[1, 1, 1]] {
        let p = XPolynomial::from_i64(field, coeffs);
        let (_, q) = p.strip_x_power();
        let Some(d) = q.degree() else { continue };
        let lp = build_lp(&p)?;
        for k in 0..=2 {
            let got = ext_oracle(&lp, &build_s1_power(field, k), budget)?;
            if got != k * d {
                return fail(format!("Ext(L_p, S_1^{k}) = {got} for p = {p}"));
            }
        }
    }
    Ok(None)
}

fn check_formulas(field: Field, budget: &Budget) -> crate::Result<Option<String>> {
    let mut rng = rng(8);
    for _ in 0..5 {
        let m = GammaRep::random(field, &mut rng, 2);
        let n = GammaRep::random(field, &mut rng, 2);
        let oracle = ext_oracle(&m, &n, budget)?;
        for which in Formula::ALL {
            if which.applies(&m, &n) {
                let v = ext_dim_general(&m, &n, which, budget)?;
                if v != oracle {
                    return fail(format!("formula ({which}) gives {v}, oracle {oracle}"));
                }
            }
        }
    }
    Ok(None)
}

fn check_extensions(field: Field, _: &Budget) -> crate::Result<Option<String>> {
    let mut rng = rng(9);
    for _ in 0..5 {
        let mut p = random_poly(field, &mut rng, 3);
        if p.coeff(0).is_zero() {
            p = p.add(&XPolynomial::one(field));
        }
        let Some(d) = p.strip_x_power().1.degree().filter(|&d| d > 0) else { continue };
        let split = build_extension(&p, &ExtClassVector::zero(field, 1))?;
        if !is_split_extension(&p, &split)? {
            return fail(format!("zero class does not split for p = {p}"));
        }
        let mut c = vec![field.zero(); d];
        c[0] = field.one();
        let ns = build_extension(&p, &ExtClassVector::new(vec![XPolynomial::from_coeffs(field, c)]))?;
        if is_split_extension(&p, &ns)? {
            return fail(format!("nonzero class splits for p = {p}"));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["tjk"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(run_args(&["normalize", "x*y"]).1.trim(), "1");
        assert_eq!(run_args(&["normalize", "(1-y*x)^2"]).1.trim(), "1 - y*x");
        assert_eq!(run_args(&["normalize", "x^2*y"]).1.trim(), "x");
        assert_eq!(run_args(&["normalize", "-(x - y)"]).1.trim(), "-x + y");
        assert_eq!(run_args(&["member", "-x^2", "x^2"]).1.trim(), "true");
        let (code, _, err) = run_args(&["normalize", "x^-1"]);
        assert_eq!(code, 1);
        assert!(err.contains("offset 2"));
    }

    #[test]
    fn normalize_json_terms() {
        let (_, out, _) = run_args(&["--json", "normalize", "3/2*y*x - 1"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"], json!([[0, 0, "-1"], [1, 1, "3/2"]]));
    }

    #[test]
    fn ideal_examples() {
        let (code, out, _) = run_args(&["--json", "ideal", "x^2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["p"], json!(["0", "0", "1"]));
        assert_eq!(v["L"], json!([]));
        let v: Value = serde_json::from_str(&run_args(&["--json", "ideal", "1-y*x"]).1).unwrap();
        assert_eq!(v, json!({"p": [], "L": [["1"]], "unit": false, "semisimple": true}));
    }

    #[test]
    fn budget_zero_is_exit_two() {
        assert_eq!(run_args(&["--budget", "0", "ideal", "x^2 - y"]).0, 2);
    }

    #[test]
    fn bad_usage_is_exit_one() {
        assert_eq!(run_args(&["ideal"]).0, 1);
        assert_eq!(run_args(&["--field", "Fp:4", "normalize", "x"]).0, 1);
        assert_eq!(run_args(&["ext", "S1^x", "S1"]).0, 1);
        assert_eq!(run_args(&["ext", "Lp:y", "S1"]).0, 1);
    }

    #[test]
    fn ext_examples() {
        assert_eq!(run_args(&["ext", "Lp:x-1", "S1^1"]).1.trim(), "1");
        assert_eq!(run_args(&["ext", "S1^2", "Lp:x-1"]).1.trim(), "0");
        let (code, out, _) = run_args(&["--verify", "ext", "Lp:x^2+x+1", "S1^2", "--formula", "ii"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("4\noracle: 4"));
        assert_eq!(run_args(&["ext", "S1", "S1", "--formula", "i"]).0, 1);
    }

    #[test]
    fn module_specs() {
        let q = Field::Rationals;
        assert_eq!(parse_module_spec("S1", q).unwrap().dim_u(), 1);
        assert_eq!(parse_module_spec("S1^3", q).unwrap().dim_u(), 3);
        assert_eq!(parse_module_spec("Lp:x^2+x+1", q).unwrap().dim_v(), 2);
        assert!(parse_module_spec("/nonexistent/rep.json", q).is_err());
    }
}
