//! Text syntax for algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := '-'? factor ('*'? factor)*
//! factor := ('x' | 'y' | literal | '(' expr ')') ('^' nat)?
//! literal:= nat ('/' nat)?
//! ```
//!
//! Whitespace is ignored and juxtaposition is multiplication, so `2yx^3`
//! reads as `2 * y * x^3`. Over `F_p` a literal `a/b` means `a · b^{-1}`.
//! Errors carry the 0-based character offset of the offending input.

use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::algebra::{AlgebraElement, Monomial};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Parsed syntax tree, before evaluation in `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprTree {
    /// Signed summands; `true` marks a subtracted term.
    Sum(Vec<(bool, ExprTree)>),
    Product(Vec<ExprTree>),
    Power(Box<ExprTree>, u32),
    Symbol(char),
    Literal(Scalar),
}

impl ExprTree {
    pub fn evaluate(&self, field: Field) -> AlgebraElement {
        match self {
            ExprTree::Sum(terms) => {
                let mut acc = AlgebraElement::zero(field);
                for (neg, t) in terms {
                    let v = t.evaluate(field);
                    acc = if *neg { &acc - &v } else { &acc + &v };
                }
                acc
            }
            ExprTree::Product(factors) => factors
                .iter()
                .fold(AlgebraElement::one(field), |acc, f| &acc * &f.evaluate(field)),
            ExprTree::Power(base, n) => base.evaluate(field).pow(*n),
            ExprTree::Symbol('x') => AlgebraElement::x(field),
            ExprTree::Symbol(_) => AlgebraElement::y(field),
            ExprTree::Literal(c) => AlgebraElement::constant(c.clone()),
        }
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    field: Field,
    _src: &'a str,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ExprTree> {
        let mut terms = vec![(false, self.term()?)];
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    terms.push((false, self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 && !terms[0].0 {
            terms.pop().unwrap().1
        } else {
            ExprTree::Sum(terms)
        })
    }

    fn starts_factor(c: char) -> bool {
        c == 'x' || c == 'y' || c == '(' || c.is_ascii_digit()
    }

    fn term(&mut self) -> Result<ExprTree> {
        let negated = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(c) if Self::starts_factor(c) => factors.push(self.factor()?),
                _ => break,
            }
        }
        let t = if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ExprTree::Product(factors)
        };
        Ok(if negated {
            ExprTree::Sum(vec![(true, t)])
        } else {
            t
        })
    }

    fn nat(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, self.chars[start..self.pos].iter().collect()))
    }

    fn factor(&mut self) -> Result<ExprTree> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return err(self.chars.len(), "unexpected end of input"),
        };
        let base = match self.chars[start] {
            c @ ('x' | 'y') => {
                self.pos += 1;
                ExprTree::Symbol(c)
            }
            '(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                inner
            }
            c if c.is_ascii_digit() => self.literal()?,
            c => return err(start, format!("unexpected character {c:?}")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            match self.peek() {
                Some('-') => return err(self.pos, "negative exponent"),
                Some(c) if c.is_ascii_digit() => {}
                Some(c) => return err(self.pos, format!("exponent must be a non-negative integer, found {c:?}")),
                None => return err(self.pos, "missing exponent"),
            }
            let (at, digits) = self.nat().expect("digit checked");
            if self.chars.get(self.pos) == Some(&'.') {
                return err(self.pos, "non-integer exponent");
            }
            let n: u32 = digits
                .parse()
                .map_err(|_| Error::Parse {
                    offset: at,
                    message: "exponent too large".into(),
                })?;
            return Ok(ExprTree::Power(Box::new(base), n));
        }
        Ok(base)
    }

    fn literal(&mut self) -> Result<ExprTree> {
        let (at, num) = self.nat().expect("caller checked digit");
        let num = BigInt::from_str(&num).expect("digits");
        if self.peek() == Some('/') {
            self.pos += 1;
            let Some((_, den)) = self.nat() else {
                return err(self.pos, "expected denominator");
            };
            let den = BigInt::from_str(&den).expect("digits");
            let value = self.field.from_ratio(&num, &den).map_err(|_| Error::Parse {
                offset: at,
                message: format!("zero denominator in {}", self.field),
            })?;
            return Ok(ExprTree::Literal(value));
        }
        Ok(ExprTree::Literal(self.field.from_bigint(&num)))
    }
}

pub fn parse_tree(text: &str, field: Field) -> Result<ExprTree> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        field,
        _src: text,
    };
    if p.peek().is_none() {
        return err(0, "empty expression");
    }
    let tree = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected character {c:?}"));
    }
    Ok(tree)
}

pub fn parse(text: &str, field: Field) -> Result<AlgebraElement> {
    Ok(parse_tree(text, field)?.evaluate(field))
}

fn monomial_text(m: Monomial) -> String {
    let mut parts = Vec::new();
    match m.y {
        0 => {}
        1 => parts.push("y".to_string()),
        n => parts.push(format!("y^{n}")),
    }
    match m.x {
        0 => {}
        1 => parts.push("x".to_string()),
        n => parts.push(format!("x^{n}")),
    }
    parts.join("*")
}

/// Canonical text: terms ascending in the `y`-exponent, then the
/// `x`-exponent; `0` for the zero element.
pub fn format(a: &AlgebraElement) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in a.terms().iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        match (k == 0, neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        let mono = monomial_text(*m);
        if mono.is_empty() {
            write!(out, "{abs}").unwrap();
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            write!(out, "{abs}*{mono}").unwrap();
        }
    }
    out
}
