use thiserror::Error;

/// Errors produced by the arithmetic, matrix, and group layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be prime, got {0}")]
    CompositeModulus(u64),

    #[error("modulus {0} exceeds the supported range (p < 2^31)")]
    ModulusTooLarge(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("invalid base {0}, expected base >= 2")]
    InvalidBase(u64),

    #[error("digit {digit} at position {position} is out of range for base {base}")]
    InvalidDigit { digit: u64, position: usize, base: u64 },

    #[error("digit string has a leading zero at position {0}")]
    LeadingZero(usize),

    #[error("{what} = {value} exceeds the configured cap {cap}")]
    SizeCap { what: &'static str, value: u128, cap: u128 },

    #[error("k = {k} exceeds n = {n}")]
    KExceedsN { n: u64, k: u64 },

    #[error("zero has no multiplicative inverse mod {0}")]
    ZeroInverse(u64),

    #[error("matrix dimension must be at least 1, got {0}")]
    Dimension(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not upper-triangular Toeplitz: entry ({row}, {col}) breaks the pattern")]
    NotToeplitz { row: usize, col: usize },

    #[error("index {index} out of range (must be < {bound})")]
    IndexOutOfRange { index: u64, bound: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
