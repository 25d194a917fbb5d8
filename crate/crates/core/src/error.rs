use thiserror::Error;

/// Errors raised by the toolkit. Variants follow the failure classes of the
/// public operations: bad input values, shape mismatches, invalid parameters,
/// unsupported oracle combinations and violated preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("degenerate polar: {0}")]
    DegeneratePolar(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("outside the range of validity: {0}")]
    OutOfValidity(String),

    #[error("internal fault: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure;
