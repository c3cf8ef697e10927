use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("ring parameters differ (n = {left} vs n = {right}, or coefficient modes differ)")]
    ParamsMismatch { left: u32, right: u32 },

    #[error("index {index} out of range [1, {bound}]")]
    IndexOutOfRange { index: i64, bound: u32 },

    #[error("n = {0} is not a power of 2 (at least 8 is required here)")]
    NotPowerOfTwo(u32),

    #[error("n = {0} is not supported (1 <= n <= 32 required)")]
    UnsupportedRank(u32),

    #[error("modulus 2^{k} is too small; at least 2^{required} is required")]
    ModulusTooSmall { k: u32, required: u32 },

    #[error("expression contains {symbol}, which has no meaning in the {ring}")]
    WrongSide { symbol: String, ring: &'static str },

    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),

    #[error("valuation {found} is below the required {required}")]
    ValuationTooSmall { found: String, required: u32 },

    #[error("{value} is not divisible by {divisor}")]
    NotDivisible { value: String, divisor: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
