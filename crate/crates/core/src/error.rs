use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("insufficient precision in {0}")]
    InsufficientPrecision(&'static str),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    InvalidPrecision,
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("ord search window [{lo}, {hi}] exhausted")]
    WindowExceeded { lo: i64, hi: i64 },
    #[error("target is not a 1-unit")]
    NotOneUnit,
    #[error("exponent {0} is not a prime different from p")]
    UnsupportedExponent(u32),
    #[error("approximation target has a coefficient of negative valuation")]
    UnsupportedTarget,
    #[error("refine only applies to Z_p level spaces with k' >= k")]
    InvalidRefinement,
    #[error("point index {0} out of range")]
    PointOutOfRange(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("iteration did not converge")]
    NoConvergence,
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
