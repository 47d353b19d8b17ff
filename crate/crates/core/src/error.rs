use thiserror::Error;

/// Errors raised by the library.
///
/// `TheoremViolated` is special: it is only produced when an instance satisfies
/// the hypothesis of a proven statement and the constructive procedure still
/// fails to produce the conclusion. Callers treat it as a finding, not as bad
/// input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("empty family: {0}")]
    EmptyFamily(&'static str),

    #[error("empty point set: {0}")]
    EmptyPointSet(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration guard exceeded: {needed} items requested, limit {limit}")]
    GuardExceeded { needed: u128, limit: u64 },

    #[error("box {0} contains no point of S")]
    Unpierceable(usize),

    #[error("theorem assertion failed: {0}")]
    TheoremViolated(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
