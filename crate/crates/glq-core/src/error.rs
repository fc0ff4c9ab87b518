//! Crate-wide error type.

/// Errors reported by every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation
    /// (e.g. a fugacity out of range, or a non-invertible constant term).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two series of different truncation orders were combined without an
    /// explicit truncation request.
    #[error("series order mismatch: {left} vs {right}; truncate explicitly before combining")]
    OrderMismatch { left: usize, right: usize },

    /// A coefficient index beyond the truncation order was requested.
    #[error("coefficient index {index} exceeds series order {order}")]
    CoefficientBeyondOrder { index: usize, order: usize },

    /// A configurable resource cap would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The operation is not implemented for these inputs (e.g. explicit
    /// polynomial enumeration over a non-prime field).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A standing self-check failed; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
