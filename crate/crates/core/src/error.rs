use thiserror::Error;

use crate::poly::Exponent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("operands belong to different rings")]
    RingMismatch,

    #[error("weight vector is not generic: maximum attained by {0:?}")]
    Tie(Vec<Exponent>),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generator {index} is not homogeneous")]
    Inhomogeneous { index: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration needs {needed} selections, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("exponent overflow")]
    Overflow,

    #[error("verification failed: {0}")]
    Verification(String),
}
