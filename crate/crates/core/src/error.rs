use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration of {size} atoms exceeds the limit of {limit}")]
    Resource { size: u128, limit: u128 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("adversary error: {0}")]
    Adversary(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Fails with [`Error::Resource`] when `size` exceeds `limit`.
pub(crate) fn check_budget(size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::Resource { size, limit })
    } else {
        Ok(())
    }
}
