use thiserror::Error;

#[derive(Debug, Error)]
pub enum QError {
    /// Input outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operand dimensions do not match.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An iterative routine failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A complex matrix fails the quaternionic block structure check.
    #[error("matrix is not quaternionic-linear for this frame: {0}")]
    Structure(String),

    /// An internal consistency invariant was violated.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = QError> = std::result::Result<T, E>;
