use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operands live in different structures (different p, different ring contexts).
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An identity that must hold for every valid input failed; this is an arithmetic bug.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("unit required: {0}")]
    UnitRequired(String),
    #[error("not exactly divisible: {0}")]
    NotDivisible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
