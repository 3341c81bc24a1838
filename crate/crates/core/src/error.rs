use thiserror::Error;

/// Errors raised by model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("{side} prospect integral did not converge (estimate {estimate:e}, error {error:e}, {panels} panels)")]
    Divergence {
        side: &'static str,
        estimate: f64,
        error: f64,
        panels: usize,
    },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
