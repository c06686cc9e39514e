//! Forward-mode evaluation of value, first and second derivative.

use super::{Expr, Func};
use crate::ComplexVal;

/// Second-order truncated Taylor number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Taylor2 {
    pub v: ComplexVal,
    pub d1: ComplexVal,
    pub d2: ComplexVal,
}

const ZERO: ComplexVal = ComplexVal::new(0.0, 0.0);

impl Taylor2 {
    fn constant(v: ComplexVal) -> Self {
        Taylor2 { v, d1: ZERO, d2: ZERO }
    }

    fn mul(a: Self, b: Self) -> Self {
        Taylor2 {
            v: a.v * b.v,
            d1: a.d1 * b.v + a.v * b.d1,
            d2: a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
        }
    }

    fn div(a: Self, b: Self) -> Self {
        let q = a.v / b.v;
        let q1 = (a.d1 - q * b.d1) / b.v;
        let q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
        Taylor2 { v: q, d1: q1, d2: q2 }
    }

    fn powi(a: Self, n: i32) -> Self {
        if n == 0 {
            return Taylor2::constant(ComplexVal::new(1.0, 0.0));
        }
        let nf = n as f64;
        let v = a.v.powi(n);
        let pm1 = a.v.powi(n - 1);
        let mut d2 = nf * pm1 * a.d2;
        if n != 1 {
            d2 += nf * (nf - 1.0) * a.v.powi(n - 2) * a.d1 * a.d1;
        }
        Taylor2 { v, d1: nf * pm1 * a.d1, d2 }
    }

    fn call(f: Func, a: Self) -> Self {
        match f {
            Func::Exp => {
                let e = a.v.exp();
                Taylor2 { v: e, d1: e * a.d1, d2: e * (a.d2 + a.d1 * a.d1) }
            }
            Func::Sin => {
                let (s, c) = (a.v.sin(), a.v.cos());
                Taylor2 { v: s, d1: c * a.d1, d2: c * a.d2 - s * a.d1 * a.d1 }
            }
            Func::Cos => {
                let (s, c) = (a.v.sin(), a.v.cos());
                Taylor2 { v: c, d1: -s * a.d1, d2: -s * a.d2 - c * a.d1 * a.d1 }
            }
        }
    }
}

pub(crate) fn eval(e: &Expr, z: ComplexVal) -> Taylor2 {
    match e {
        Expr::Var => Taylor2 { v: z, d1: ComplexVal::new(1.0, 0.0), d2: ZERO },
        Expr::Num(x) => Taylor2::constant(ComplexVal::new(*x, 0.0)),
        Expr::Imag(x) => Taylor2::constant(ComplexVal::new(0.0, *x)),
        Expr::I => Taylor2::constant(ComplexVal::new(0.0, 1.0)),
        Expr::Pi => Taylor2::constant(ComplexVal::new(std::f64::consts::PI, 0.0)),
        Expr::E => Taylor2::constant(ComplexVal::new(std::f64::consts::E, 0.0)),
        Expr::Neg(a) => {
            let a = eval(a, z);
            Taylor2 { v: -a.v, d1: -a.d1, d2: -a.d2 }
        }
        Expr::Add(a, b) => {
            let (a, b) = (eval(a, z), eval(b, z));
            Taylor2 { v: a.v + b.v, d1: a.d1 + b.d1, d2: a.d2 + b.d2 }
        }
        Expr::Sub(a, b) => {
            let (a, b) = (eval(a, z), eval(b, z));
            Taylor2 { v: a.v - b.v, d1: a.d1 - b.d1, d2: a.d2 - b.d2 }
        }
        Expr::Mul(a, b) => Taylor2::mul(eval(a, z), eval(b, z)),
        Expr::Div(a, b) => Taylor2::div(eval(a, z), eval(b, z)),
        Expr::Pow(a, n) => Taylor2::powi(eval(a, z), *n),
        Expr::Call(f, a) => Taylor2::call(*f, eval(a, z)),
    }
}
