//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Contract violations (bad
//! dimensions, non-Hermitian inputs where Hermiticity is required, invalid
//! density matrices, exceeded size caps) are reported as typed variants so
//! callers and the CLI can map them to exit codes without string matching.

use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or state dimensions do not match the operation's requirements.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A brute-force path would exceed its configured dense-size cap.
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    /// An input that must be Hermitian is not (inputs are rejected, never
    /// silently symmetrized).
    #[error("matrix not Hermitian: max |M - M†| residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    /// A matrix entry is NaN or infinite.
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A density-matrix invariant failed (trace, Hermiticity, positivity).
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// A pure-state invariant failed.
    #[error("invalid pure state: {0}")]
    InvalidPureState(String),

    /// Kraus-operator completeness is violated beyond the hard tolerance.
    #[error("Kraus completeness violated: max |ΣΠ†Π - I| = {residual:.3e}")]
    CompletenessViolated { residual: f64 },

    /// Parameter-dependence information required for derivatives is missing.
    #[error("channel has no parameter dependence: {0}")]
    MissingDependence(String),

    /// A POVM produced a negative outcome probability where a classical
    /// Fisher information evaluation requires a genuine distribution.
    #[error("invalid POVM: negative outcome probability {probability:.3e} at outcome {outcome}")]
    NegativeProbability { outcome: usize, probability: f64 },

    /// A matrix that must be inverted is singular or too ill-conditioned.
    #[error("rank-deficient matrix: condition number {cond:.3e} exceeds guard {guard:.1e}")]
    RankDeficient { cond: f64, guard: f64 },

    /// Numerical pathology (e.g. fidelity above 1 beyond tolerance).
    #[error("numerical pathology: {0}")]
    Numerical(String),

    /// A precondition specific to one operation failed.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
