use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model or solver parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The displacement solver exhausted its iteration budget.
    #[error("solver did not converge for x = {x} within {iterations} iterations")]
    NoConvergence { x: f64, iterations: u32 },

    /// A configuration key was unknown or carried an unusable value.
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { key: key.into(), reason: reason.into() }
    }
}
