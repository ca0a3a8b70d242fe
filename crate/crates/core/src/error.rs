use thiserror::Error;

/// Errors raised by the numeric kernel and the physics modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    Unnormalized { norm_sqr: f64 },

    #[error("truncation mismatch: {left} vs {right} photon blocks")]
    TruncationMismatch { left: usize, right: usize },

    #[error("{what} out of domain: {value}")]
    OutOfDomain { what: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
