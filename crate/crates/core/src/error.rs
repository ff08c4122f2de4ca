use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (bad n, angle, x, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs violate a structural precondition (dimension mismatch, non-unitary, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Priors with eta1 in {0, 1}; discrimination is trivial there.
    #[error("degenerate priors: eta1 = {eta1}")]
    DegeneratePriors { eta1: f64 },

    /// A computed probability left [0, 1] by more than the reporting slack.
    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
