use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    Dimension { expected: usize, got: usize },

    /// A model or configuration parameter is invalid.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A precondition on the relation between arguments is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An aggregation was attempted on an empty collection.
    #[error("empty input: {0}")]
    Empty(&'static str),

    /// Experiment configuration could not be parsed or validated.
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the error stems from user-supplied configuration rather than
    /// a runtime failure.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Dimension { .. }
                | Error::InvalidParameter { .. }
                | Error::Precondition(_)
                | Error::Empty(_)
                | Error::Config { .. }
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
