//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid Schatten exponent p = {0} (need p >= 1)")]
    InvalidExponent(f64),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("irrep computation failed after {0} attempts")]
    IrrepFailure(usize),

    #[error("channel is not trace preserving (error {0:.3e})")]
    NotTracePreserving(f64),

    #[error("invalid symbol density: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spec violates structural conditions: {0}")]
    ConditionFailure(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
