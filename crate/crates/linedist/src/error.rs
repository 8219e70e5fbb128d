//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A point or direction does not match the expected dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A coordinate is NaN or infinite.
    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    /// An objective name that no benchmark is registered under.
    #[error("unknown objective function `{0}` (expected `rastrigin` or `griewank`)")]
    UnknownFunction(String),

    /// A structurally invalid configuration (bounds, run parameters, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
