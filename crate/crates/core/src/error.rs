use thiserror::Error;

/// Errors shared by every solver and evaluator in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation hit a genuine singularity (projection pole, r = 0, U = 0).
    #[error("singularity: {0}")]
    Singularity(String),

    /// The model or parameter combination is not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A root/eigenvalue search failed to bracket inside its window.
    #[error("search window exhausted: {0}")]
    SearchWindow(String),

    /// A requested coupling is not an eigenvalue of the problem.
    #[error("not an eigenvalue: {0}")]
    NotAnEigenvalue(String),

    /// Generic numerical failure (non-convergence, overflow, bad mesh).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
