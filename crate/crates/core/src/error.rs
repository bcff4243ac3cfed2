use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation (zero quaternion, non-finite data, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse `{literal}`: {reason}")]
    Literal { literal: String, reason: String },

    /// Parameter set rejected by the correctness conditions.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Malformed command-line request.
    #[error("usage: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn literal(literal: &str, reason: impl Into<String>) -> Self {
        Error::Literal { literal: literal.to_string(), reason: reason.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
