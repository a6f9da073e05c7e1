use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),

    #[error("number of successes must be at least {min}, got {got}")]
    InvalidSuccessTarget { got: u64, min: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("no success target up to {limit} reaches a normalized error of {target}")]
    Unreachable { target: f64, limit: u64 },

    #[error("{cap} trials elapsed without reaching the success target; the random source is broken")]
    TrialCapExceeded { cap: u64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
