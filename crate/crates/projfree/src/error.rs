//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by vector arithmetic, constraint sets, problem oracles,
/// solvers and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("step size {0} outside [0, 1]")]
    StepOutOfRange(f64),

    #[error("{what} must be positive")]
    EmptyDomain { what: &'static str },

    #[error("component index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{0} has too many extreme points to enumerate (dimension limit {1})")]
    EnumerationTooLarge(&'static str, usize),

    #[error("invalid constraint set: {0}")]
    InvalidSet(String),

    #[error("finite-difference step h must be positive, got {0}")]
    InvalidFdStep(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("rate fit needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("rate fit requires positive values, got {0}")]
    NonPositiveValue(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
