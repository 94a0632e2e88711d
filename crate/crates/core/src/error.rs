use thiserror::Error;

/// Errors surfaced by matrix construction, spectral decomposition, scalar
/// kernels, series evaluation and quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("matrix is not diagonalizable within working tolerance: {0}")]
    NonDiagonalizable(String),

    #[error("matrices do not commute within tolerance: {0}")]
    NotCommuting(String),

    #[error("matrix is not positive stable: eigenvalue {0} has non-positive real part")]
    NotPositiveStable(String),

    #[error("scalar function singular at eigenvalue {0}")]
    SingularValue(String),

    #[error("power base must be positive, got {0}")]
    NonPositiveBase(f64),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("argument guard violated: {0}")]
    GuardViolation(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
