//! Shared error type for the toolkit.

use thiserror::Error;

/// Errors surfaced by model construction, solvers, and reporting.
#[derive(Debug, Error)]
pub enum QombiError {
    /// A vector or state had the wrong length for the model it was used with.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Malformed input: bad indices, non-finite values, out-of-range options.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Structurally valid input on which the requested operation is
    /// meaningless (e.g. rescaling an all-zero model).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Problem size exceeds a documented dense-simulation bound.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A solver failed to produce a usable result.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Reports that cannot be compared (different problem digests).
    #[error("incompatible reports: {0}")]
    IncompatibleReports(String),
}

pub type Result<T> = std::result::Result<T, QombiError>;
