use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} exceeds table limit {limit}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("no covering prime found for gap [{gap_lo}, {gap_hi}]")]
    CoverageGap { gap_lo: u64, gap_hi: u64 },

    #[error("malformed certificate data: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn out_of_range(what: &'static str, value: u64, limit: u64) -> Self {
        Error::OutOfRange { what, value, limit }
    }
}
