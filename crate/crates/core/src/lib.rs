//! Chart-local verification of contact metric geometry on ℝ³.
//!
//! The crate evaluates user-defined metrics and contact forms (given as
//! expression trees over one coordinate chart) to exact second-order jets,
//! computes Riemannian and extrinsic-geometry quantities from them, and
//! mechanically audits the identities a compatible contact metric structure
//! must satisfy, including the curvature matrix in a principal bivector
//! basis and a sectional-curvature verdict for the built-in negatively
//! curved example family.

// Index loops over fixed 3×3(×3…) tensors read closer to the math than
// iterator chains; keep them.
#![allow(clippy::needless_range_loop)]

pub mod blair;
pub mod contact;
pub mod error;
pub mod expr;
pub mod fd;
pub mod gallery;
pub mod linalg;
pub mod report;
pub mod riemann;
pub mod rng;
pub mod shape;

pub use error::{EvalError, GeomError, ParseError, Result};
pub use expr::{Expr, Params, Point};
