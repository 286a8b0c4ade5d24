use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument must be a positive integer, got {0}")]
    NonPositive(i128),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("modulus {modulus} is not divisible by period {period}")]
    NotDivisible { modulus: u64, period: u64 },

    #[error("{what} = {value} exceeds the limit {limit}")]
    GuardExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("no rooted map count for genus {genus} with {edges} edges in the table")]
    MissingData { genus: u32, edges: u64 },

    #[error("rooted map table: {0}")]
    Table(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(
    what: &'static str,
    value: impl Into<u128>,
    limit: impl Into<u128>,
) -> Result<()> {
    let (value, limit) = (value.into(), limit.into());
    if value > limit {
        Err(Error::GuardExceeded { what, value, limit })
    } else {
        Ok(())
    }
}
