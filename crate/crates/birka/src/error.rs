use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    /// A modelling assumption (invertibility, contraction, ...) failed at runtime.
    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("BiCG breakdown: {0}")]
    Breakdown(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Validation errors are caller mistakes; everything else is numerical or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Dimension(_) | Error::Invalid(_) | Error::Parse(_))
    }
}

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
