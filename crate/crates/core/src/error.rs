use alloc::string::String;

use thiserror::Error;

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters p = {p}, p' = {p_prime}: {reason}")]
    InvalidParams { p: u32, p_prime: u32, reason: &'static str },
    #[error("maximal weight must be non-negative, got {0}")]
    NegativeWeight(Rational),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("operator is not nilpotent on a space of dimension {dim}")]
    NotNilpotent { dim: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("requested mode cannot be certified within weight window {max_weight}: {detail}")]
    WindowExceeded { max_weight: Rational, detail: String },
    #[error("no solution found: {0}")]
    NotFound(String),
    #[error("fields are not local up to order {0}")]
    NotLocalUpTo(u32),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
