use thiserror::Error;

/// Errors raised by the matrix kernels, builders and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not positive definite: eigenvalue {eigenvalue:e}")]
    NotPositiveDefinite { eigenvalue: f64 },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("no solution: residual {residual:e}")]
    NoSolution { residual: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
