use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SteerError {
    /// The input does not describe a physical two-qubit state.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A scalar argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition on a vector or model argument was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported steering figure of dimension {dimension}: {reason}")]
    UnsupportedDimension { dimension: usize, reason: String },

    #[error("model has zero steering quantity; outcome probabilities are undefined")]
    EmptyModel,

    #[error("unsupported density form: {0}")]
    UnsupportedForm(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, SteerError>;
