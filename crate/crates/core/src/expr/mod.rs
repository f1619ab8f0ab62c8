//! Expression DSL for scalar fields on a 3-dimensional chart.
//!
//! Fields are finite expression trees over the chart coordinates x, y, z and
//! named parameters; they evaluate to second-order jets (value, gradient,
//! Hessian) exactly, with derivatives propagated through jet arithmetic
//! rather than symbolic differentiation. Trees are immutable after
//! construction and evaluation is pure, so a single tree may be evaluated
//! from many threads at once.

mod jet;
mod parse;

pub use jet::{Jet1, Jet2, HESS_INDEX};
pub use parse::parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::EvalError;

/// A point of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z }
    }

    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0, z: 0.0 };

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Shift one coordinate; used by the finite-difference oracles.
    pub fn shifted(&self, axis: usize, h: f64) -> Point {
        let mut c = self.coords();
        c[axis] += h;
        Point::from(c)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl From<[f64; 3]> for Point {
    fn from(c: [f64; 3]) -> Self {
        Point { x: c[0], y: c[1], z: c[2] }
    }
}

/// Evaluation-time parameter bindings, kept out of the tree so one family of
/// fields serves every parameter choice.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn new() -> Self {
        Params(BTreeMap::new())
    }

    pub fn set(mut self, name: &str, value: f64) -> Self {
        self.0.insert(name.to_owned(), value);
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_owned(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<const N: usize> From<[(&str, f64); N]> for Params {
    fn from(pairs: [(&str, f64); N]) -> Self {
        let mut p = Params::new();
        for (k, v) in pairs {
            p.insert(k, v);
        }
        p
    }
}

/// Chart coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Unary function applied to a subexpression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "sqrt" => Some(Func::Sqrt),
            "log" => Some(Func::Log),
            _ => None,
        }
    }
}

/// Power exponent: integers multiply out exactly, real exponents require a
/// positive base (no branch cuts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Int(i32),
    Real(f64),
}

/// A scalar field on the chart.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Coord(Axis),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Apply(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn coord(axis: Axis) -> Expr {
        Expr::Coord(axis)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_owned())
    }

    /// Evaluates the field to a 2-jet at `p` with the given bindings.
    pub fn eval_jet2(&self, p: Point, params: &Params) -> Result<Jet2, EvalError> {
        match self {
            Expr::Const(v) => Ok(Jet2::constant(*v)),
            Expr::Coord(a) => Ok(Jet2::coordinate(a.index(), p.coords()[a.index()])),
            Expr::Param(name) => params
                .get(name)
                .map(Jet2::constant)
                .ok_or_else(|| EvalError::UnboundParameter(name.clone())),
            Expr::Neg(e) => Ok(-e.eval_jet2(p, params)?),
            Expr::Add(a, b) => Ok(a.eval_jet2(p, params)? + b.eval_jet2(p, params)?),
            Expr::Sub(a, b) => Ok(a.eval_jet2(p, params)? - b.eval_jet2(p, params)?),
            Expr::Mul(a, b) => Ok(a.eval_jet2(p, params)? * b.eval_jet2(p, params)?),
            Expr::Div(a, b) => a.eval_jet2(p, params)?.div(b.eval_jet2(p, params)?),
            Expr::Pow(base, Exponent::Int(n)) => base.eval_jet2(p, params)?.powi(*n),
            Expr::Pow(base, Exponent::Real(r)) => base.eval_jet2(p, params)?.powf(*r),
            Expr::Apply(f, e) => {
                let j = e.eval_jet2(p, params)?;
                match f {
                    Func::Exp => Ok(j.exp()),
                    Func::Sin => Ok(j.sin()),
                    Func::Cos => Ok(j.cos()),
                    Func::Sqrt => j.sqrt(),
                    Func::Log => j.log(),
                }
            }
        }
    }

    /// Value only; same tree walk, cheaper call sites.
    pub fn eval(&self, p: Point, params: &Params) -> Result<f64, EvalError> {
        Ok(self.eval_jet2(p, params)?.value)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, child: &Expr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let _ = self;
        if child.precedence() < min_prec {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => {
                if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Coord(a) => write!(f, "{}", a.name()),
            Expr::Param(name) => write!(f, "{name}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                self.fmt_child(e, 4, f)
            }
            Expr::Add(a, b) => {
                self.fmt_child(a, 1, f)?;
                write!(f, " + ")?;
                self.fmt_child(b, 2, f)
            }
            Expr::Sub(a, b) => {
                self.fmt_child(a, 1, f)?;
                write!(f, " - ")?;
                self.fmt_child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                self.fmt_child(a, 2, f)?;
                write!(f, "*")?;
                self.fmt_child(b, 3, f)
            }
            Expr::Div(a, b) => {
                self.fmt_child(a, 2, f)?;
                write!(f, "/")?;
                self.fmt_child(b, 3, f)
            }
            Expr::Pow(base, e) => {
                self.fmt_child(base, 5, f)?;
                match e {
                    Exponent::Int(n) if *n < 0 => write!(f, "^({n})"),
                    Exponent::Int(n) => write!(f, "^{n}"),
                    Exponent::Real(r) if *r < 0.0 => write!(f, "^({r})"),
                    Exponent::Real(r) => write!(f, "^{r}"),
                }
            }
            Expr::Apply(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_params() -> Params {
        Params::new()
    }

    #[test]
    fn constant_field() {
        let e = parse("7", &[]).unwrap();
        let j = e.eval_jet2(Point::new(1.3, -2.0, 0.4), &no_params()).unwrap();
        assert_eq!(j.value, 7.0);
        assert_eq!(j.grad, [0.0; 3]);
        assert_eq!(j.hess, [0.0; 6]);
    }

    #[test]
    fn exp_z_at_origin() {
        let e = parse("exp(z)", &[]).unwrap();
        let j = e.eval_jet2(Point::ORIGIN, &no_params()).unwrap();
        assert!((j.value - 1.0).abs() < 1e-15);
        assert_eq!(j.grad, [0.0, 0.0, 1.0]);
        let mut hess = [0.0; 6];
        hess[HESS_INDEX[2][2]] = 1.0;
        assert_eq!(j.hess, hess);
    }

    // x² + 2e^{-z} at the origin: value 2, gradient (0,0,-2), hessian diag(2,0,2).
    // Hand differentiation, cross-checked by central finite differences in fd.rs tests.
    #[test]
    fn quadratic_plus_exponential() {
        let e = parse("x^2 + 2*exp(-z)", &[]).unwrap();
        let j = e.eval_jet2(Point::ORIGIN, &no_params()).unwrap();
        assert!((j.value - 2.0).abs() < 1e-15);
        assert_eq!(j.grad, [0.0, 0.0, -2.0]);
        assert_eq!(j.hess_at(0, 0), 2.0);
        assert_eq!(j.hess_at(1, 1), 0.0);
        assert_eq!(j.hess_at(2, 2), 2.0);
        assert_eq!(j.hess_at(0, 2), 0.0);
    }

    #[test]
    fn parameters_bind_at_eval_time() {
        let e = parse("x^2 + B*exp(-z)", &["A", "B"]).unwrap();
        let p = Point::new(1.0, 0.0, 0.0);
        let j2 = e.eval_jet2(p, &Params::from([("A", 1.0), ("B", 2.0)])).unwrap();
        assert!((j2.value - 3.0).abs() < 1e-15);
        let j5 = e.eval_jet2(p, &Params::from([("B", 5.0)])).unwrap();
        assert!((j5.value - 6.0).abs() < 1e-15);
        let missing = e.eval_jet2(p, &no_params());
        assert_eq!(missing, Err(EvalError::UnboundParameter("B".into())));
    }

    #[test]
    fn domain_errors() {
        let p = Point::new(-1.0, 0.0, 0.0);
        assert!(matches!(
            parse("sqrt(x)", &[]).unwrap().eval_jet2(p, &no_params()),
            Err(EvalError::SqrtNonPositive { .. })
        ));
        assert!(matches!(
            parse("log(x)", &[]).unwrap().eval_jet2(p, &no_params()),
            Err(EvalError::LogNonPositive { .. })
        ));
        assert!(matches!(
            parse("1/(x + 1)", &[]).unwrap().eval_jet2(p, &no_params()),
            Err(EvalError::DivisionByZero)
        ));
    }

    #[test]
    fn trees_evaluate_from_many_threads() {
        let e = parse("sin(x)*exp(y) + z^3 - 1/(2 + x^2)", &[]).unwrap();
        let params = Params::new();
        std::thread::scope(|s| {
            for t in 0..4 {
                let (e, params) = (&e, &params);
                s.spawn(move || {
                    for i in 0..200 {
                        let p = Point::new(0.1 * t as f64, 0.01 * i as f64, 0.3);
                        let j = e.eval_jet2(p, params).unwrap();
                        assert!(j.value.is_finite());
                    }
                });
            }
        });
    }

    #[test]
    fn negative_integer_power() {
        let e = parse("z^-2", &[]).unwrap();
        let j = e.eval_jet2(Point::new(0.0, 0.0, 2.0), &no_params()).unwrap();
        assert!((j.value - 0.25).abs() < 1e-15);
        assert!((j.grad[2] + 0.25).abs() < 1e-15);
        assert!((j.hess_at(2, 2) - 0.375).abs() < 1e-15);
    }
}
