//! Exact arithmetic: rationals, `Q(√-7)`, `Q(√-7, i)` and sparse weighted
//! polynomials over them.

pub mod poly;
pub mod quad;
pub mod ring;
pub mod text;

use thiserror::Error;

pub use poly::{Exponents, Poly, Vars};
pub use quad::QuadExt;
pub use ring::{rat, Field, Ring};
pub use text::CoeffText;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomials are over different variable sets")]
    VariableMismatch,
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("variable weights must be positive")]
    InvalidWeight,
    #[error("parse error: {0}")]
    Parse(String),
}
