//! Crate-wide error type.

/// Errors produced by simulator components.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Vector/matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! invalid_arg {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(format!($($arg)*))
    };
}

macro_rules! dim_mismatch {
    ($($arg:tt)*) => {
        $crate::error::Error::DimensionMismatch(format!($($arg)*))
    };
}

pub(crate) use {dim_mismatch, invalid_arg};
