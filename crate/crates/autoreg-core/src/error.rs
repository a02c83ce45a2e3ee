//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by statistics construction, linear algebra, and the
/// regularization iteration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input contained NaN or infinite values.
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    /// A matrix handed in as symmetric deviated from symmetry beyond the
    /// symmetrization tolerance.
    #[error("matrix asymmetry {max_dev:.3e} exceeds tolerance {tol:.3e}")]
    Asymmetric { max_dev: f64, tol: f64 },

    /// Input lengths are inconsistent.
    #[error("length mismatch in {what}: expected {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A dimension or parameter was out of its valid range.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The Jacobi eigendecomposition did not converge within the sweep cap,
    /// or produced an eigenvalue too negative for a covariance matrix.
    #[error("eigendecomposition failed: {reason}")]
    DecompositionFailed { reason: String },

    /// A linear system was singular at `alpha = 0`. Carries the smallest
    /// pivot (Cholesky) or eigenvalue encountered.
    #[error("singular system: smallest pivot/eigenvalue {min_pivot:.6e}")]
    Singular { min_pivot: f64 },

    /// The data carries no usable signal for the regularization iteration
    /// (cross-correlation between input windows and desired output is zero).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// The effective number of parameters reached or exceeded the sample
    /// count, so the noise-variance update is undefined.
    #[error("ill-posed update: effective parameters {gamma:.6} >= samples {n}")]
    IllPosed { gamma: f64, n: usize },

    /// The operation requires statistics accumulated from data (sample
    /// averages); externally supplied expectation-form statistics were given.
    #[error("{op} requires sample-average statistics built from data; got externally supplied statistics")]
    ExpectationFormStats { op: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
