use alloc::string::String;

/// Errors raised by the algorithms in this crate.
///
/// `Validation` covers malformed or inconsistent input, `Resource` covers
/// configured bounds being exceeded, and `Consistency` flags an internal
/// invariant that failed to hold (a bug or a numerical surprise).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($t:tt)*) => { $crate::error::Error::Validation(alloc::format!($($t)*)) };
}
macro_rules! resource {
    ($($t:tt)*) => { $crate::error::Error::Resource(alloc::format!($($t)*)) };
}
macro_rules! inconsistent {
    ($($t:tt)*) => { $crate::error::Error::Consistency(alloc::format!($($t)*)) };
}
pub(crate) use {inconsistent, invalid, resource};
