use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("budget exceeded: {what} is {requested}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        limit: u64,
        requested: u64,
    },

    #[error("degenerate normalizer: c_last + m = 0")]
    DegenerateNormalizer,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
