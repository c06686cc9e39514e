//! Entire functions given by expression trees.
//!
//! The grammar covers `z`, complex constants, `+ - *`, division by
//! `z`-free subexpressions, integer powers and `exp`, `sin`, `cos`. Every
//! admissible expression is an entire function; divisors that depend on `z`
//! are rejected at parse time.

mod eval;
mod parser;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::analytic::{AnalyticMap, EvalError, Jet};
use crate::ComplexVal;

pub(crate) use eval::Taylor2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax { offset: usize, expected: String, found: String },
    #[error("not entire: divisor or negative power depends on z (byte {offset})")]
    NonEntire { offset: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

/// Expression tree. Literals are kept as written so that printing and
/// re-parsing reproduces the same tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Num(f64),
    Imag(f64),
    I,
    Pi,
    E,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn depends_on_z(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Imag(_) | Expr::I | Expr::Pi | Expr::E => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.depends_on_z(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_z() || b.depends_on_z()
            }
        }
    }

    /// Replaces every occurrence of `z` by `inner`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(inner));
        match self {
            Expr::Var => inner.clone(),
            Expr::Num(_) | Expr::Imag(_) | Expr::I | Expr::Pi | Expr::E => self.clone(),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, n) => Expr::Pow(sub(a), *n),
            Expr::Call(f, a) => Expr::Call(*f, sub(a)),
        }
    }

    /// Degree in `z` when the tree is a polynomial, `None` when it contains a
    /// transcendental call on a `z`-dependent argument. The degree is an
    /// upper bound (cancellation is not detected).
    pub fn polynomial_degree(&self) -> Option<u32> {
        match self {
            Expr::Var => Some(1),
            Expr::Num(_) | Expr::Imag(_) | Expr::I | Expr::Pi | Expr::E => Some(0),
            Expr::Neg(a) => a.polynomial_degree(),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.polynomial_degree()?.max(b.polynomial_degree()?)),
            Expr::Mul(a, b) => Some(a.polynomial_degree()? + b.polynomial_degree()?),
            Expr::Div(a, _) => a.polynomial_degree(),
            Expr::Pow(a, n) => {
                let d = a.polynomial_degree()?;
                if d == 0 {
                    Some(0)
                } else {
                    Some(d * (*n).max(0) as u32)
                }
            }
            Expr::Call(_, a) => {
                if a.depends_on_z() {
                    None
                } else {
                    Some(0)
                }
            }
        }
    }
}

fn fmt_literal(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // `{}` on f64 is shortest-round-trip and never uses exponent notation.
    write!(f, "{x}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => f.write_str("z"),
            Expr::Num(x) => fmt_literal(*x, f),
            Expr::Imag(x) => {
                fmt_literal(*x, f)?;
                f.write_str("i")
            }
            Expr::I => f.write_str("i"),
            Expr::Pi => f.write_str("pi"),
            Expr::E => f.write_str("e"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => match a.as_ref() {
                Expr::Var | Expr::I | Expr::Pi | Expr::E | Expr::Call(..) => write!(f, "{a}^{n}"),
                Expr::Num(_) | Expr::Imag(_) => write!(f, "({a})^{n}"),
                _ => write!(f, "{a}^{n}"),
            },
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// A parsed entire function together with the text it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct EntireMap {
    source: String,
    ast: Expr,
}

impl EntireMap {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let ast = parser::parse(src)?;
        Ok(EntireMap { source: src.trim().to_string(), ast })
    }

    /// Wraps an expression tree; the source becomes its canonical printing.
    pub fn from_expr(ast: Expr) -> Self {
        EntireMap { source: ast.to_string(), ast }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// Canonical, fully parenthesised text. Re-parses to an equal tree.
    pub fn canonical(&self) -> String {
        self.ast.to_string()
    }

    pub fn eval(&self, z: ComplexVal) -> Result<ComplexVal, EvalError> {
        Ok(self.jet(z)?.value)
    }

    pub fn eval_jet(&self, z: ComplexVal) -> Result<Jet, EvalError> {
        let t = eval::eval(&self.ast, z);
        if t.v.is_finite() && t.d1.is_finite() {
            Ok(Jet { value: t.v, deriv: t.d1 })
        } else {
            Err(EvalError::Overflow { at: z })
        }
    }

    pub(crate) fn taylor2(&self, z: ComplexVal) -> Taylor2 {
        eval::eval(&self.ast, z)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &EntireMap) -> EntireMap {
        EntireMap::from_expr(self.ast.substitute(&inner.ast))
    }

    /// `f(n z) / n` as an expression tree; `n = 1` returns `f` unchanged.
    pub fn rescaled(&self, n: u64) -> EntireMap {
        assert!(n >= 1, "rescale index must be at least 1");
        if n == 1 {
            return self.clone();
        }
        let k = Expr::Num(n as f64);
        let scaled = Expr::Mul(Box::new(k.clone()), Box::new(Expr::Var));
        let body = self.ast.substitute(&scaled);
        EntireMap::from_expr(Expr::Div(Box::new(body), Box::new(k)))
    }

    /// `f(z + c) - d`.
    pub fn translated(&self, c: ComplexVal, d: ComplexVal) -> EntireMap {
        let lit = |w: Complex64| -> Expr {
            let re = if w.re < 0.0 { Expr::Neg(Box::new(Expr::Num(-w.re))) } else { Expr::Num(w.re) };
            let im = if w.im < 0.0 { Expr::Neg(Box::new(Expr::Imag(-w.im))) } else { Expr::Imag(w.im) };
            Expr::Add(Box::new(re), Box::new(im))
        };
        let shifted = self.ast.substitute(&Expr::Add(Box::new(Expr::Var), Box::new(lit(c))));
        EntireMap::from_expr(Expr::Sub(Box::new(shifted), Box::new(lit(d))))
    }

    pub fn polynomial_degree(&self) -> Option<u32> {
        self.ast.polynomial_degree()
    }
}

impl FromStr for EntireMap {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntireMap::parse(s)
    }
}

impl fmt::Display for EntireMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Serialize for EntireMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for EntireMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        EntireMap::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl AnalyticMap for EntireMap {
    fn jet(&self, z: ComplexVal) -> Result<Jet, EvalError> {
        self.eval_jet(z)
    }
}

/// `f'` as an analytic map in its own right (value `f'`, derivative `f''`).
#[derive(Debug, Clone, Copy)]
pub struct Derivative<'a>(pub &'a EntireMap);

impl AnalyticMap for Derivative<'_> {
    fn jet(&self, z: ComplexVal) -> Result<Jet, EvalError> {
        let t = self.0.taylor2(z);
        if t.d1.is_finite() && t.d2.is_finite() {
            Ok(Jet { value: t.d1, deriv: t.d2 })
        } else {
            Err(EvalError::Overflow { at: z })
        }
    }
}

pub fn parse_map(src: &str) -> Result<EntireMap, ParseError> {
    EntireMap::parse(src)
}

pub fn eval_jet(f: &EntireMap, z: ComplexVal) -> Result<Jet, EvalError> {
    f.eval_jet(z)
}
