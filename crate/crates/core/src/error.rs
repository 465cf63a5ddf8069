use thiserror::Error;

/// Errors raised by code construction, tagging and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("guardrail exceeded: {what} = {value} > limit {limit}")]
    Guardrail {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("closed form has no prefix-form witness weight in [{lo}, {hi}]; use the brute-force method")]
    NoWitness { lo: usize, hi: usize },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn dim(expected: usize, actual: usize) -> Self {
        Error::Dimension { expected, actual }
    }
}
