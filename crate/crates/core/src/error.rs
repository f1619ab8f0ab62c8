//! Error types shared across the crate.

use thiserror::Error;

/// Failure while evaluating an expression at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt of non-positive argument {arg}")]
    SqrtNonPositive { arg: f64 },
    #[error("log of non-positive argument {arg}")]
    LogNonPositive { arg: f64 },
    #[error("power with non-positive base {base}")]
    PowNonPositiveBase { base: f64 },
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
}

/// Syntax error with a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

/// Geometry-level failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("metric is not positive definite at the point (leading minor {minor} = {value:.6e})")]
    NotPositiveDefinite { minor: usize, value: f64 },
    #[error("one-form is not contact at the point (volume density {density:.6e})")]
    NotContact { density: f64 },
    #[error("pair fails compatibility at the point: {predicate} (residual {residual:.6e})")]
    NotCompatible { predicate: &'static str, residual: f64 },
    #[error("plane is degenerate (gram determinant {gram:.6e})")]
    DegeneratePlane { gram: f64 },
    #[error("frame is not orthonormal (max gram defect {defect:.6e})")]
    FrameNotOrthonormal { defect: f64 },
    #[error("umbilic point: principal frame undefined (lambda {lambda:.6e})")]
    UmbilicPoint { lambda: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("k = 0 is not a contact metric constant")]
    ZeroK,
}

pub type Result<T> = std::result::Result<T, GeomError>;
