use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("base must be at least {min}, got {base}")]
    BaseTooSmall { base: u64, min: u64 },
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u64, base: u64 },
    #[error("excluded digit set covers every digit of base {0}")]
    EmptyDigitSet(u64),
    #[error("coprimality modulus must be positive")]
    ZeroModulus,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("guard exceeded: {what} = {value} > {limit}")]
    Guard {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NotConverged {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },
    #[error("no samples survived the filters")]
    EmptySample,
}

pub type Result<T> = std::result::Result<T, Error>;
