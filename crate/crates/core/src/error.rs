use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient at exponent {exp} requested but series is only known below q^{trunc}")]
    BeyondTruncation { exp: i64, trunc: i64 },
    #[error("non-invertible series")]
    NonInvertible,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("tail majorant is not summable at Im = {0}")]
    NonSummable(f64),
    #[error("indeterminate comparison after raising precision to {0} bits")]
    Indeterminate(u32),
    #[error("lower bound is not positive: {0}")]
    NonPositiveLowerBound(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
