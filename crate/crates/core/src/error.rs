use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("coefficient matrix is not completely positive (eigenvalue {eigenvalue:e})")]
    NotCompletelyPositive { eigenvalue: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("quadrature did not converge after {evaluations} evaluations (error estimate {error_estimate:e}, tolerance {tolerance:e})")]
    Quadrature {
        evaluations: usize,
        error_estimate: f64,
        tolerance: f64,
    },

    #[error("Kraus set has negative weights; pass an override to apply it anyway")]
    InvalidKrausSet,
}

pub type Result<T> = std::result::Result<T, Error>;
