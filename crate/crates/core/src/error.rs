use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid criterion `{name}`: {reason}")]
    InvalidCriterion { name: String, reason: String },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("invalid outcome: {0}")]
    InvalidOutcome(String),

    #[error("invalid posterior: {0}")]
    InvalidPosterior(String),

    #[error("sample count mismatch: {first} vs {second}")]
    SampleCountMismatch { first: usize, second: usize },

    #[error("invalid value for `{field}`: {message}")]
    Field { field: String, message: String },

    /// Weights that parse but cannot define a model (bad sums or signs).
    #[error("infeasible weights at `{field}`: {message}")]
    InfeasibleWeights { field: String, message: String },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    /// The offending field, for errors that carry one.
    pub fn field_name(&self) -> Option<&str> {
        match self {
            Error::Field { field, .. } | Error::InfeasibleWeights { field, .. } => Some(field),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
