use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed cost at ({u}, {v}): {value}")]
    MalformedCost { u: usize, v: usize, value: f64 },
    #[error("matching is empty, nothing to sample")]
    EmptyMatching,
    #[error("instance too large for the exact baseline: n = {n}, cap = {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("masses do not sum to one (sum = {0})")]
    MassMismatch(f64),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
