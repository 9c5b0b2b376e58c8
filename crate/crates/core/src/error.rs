use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid prime configuration: {0}")]
    InvalidConfig(String),
    #[error("E(u) is not Eisenstein at p = {p}: {reason}")]
    NotEisenstein { p: u64, reason: String },
    #[error("working modulus p^{exp} does not fit in 63 bits")]
    ModulusTooLarge { exp: u32 },
    #[error("degree {requested} exceeds the configured bound {bound}")]
    Truncation { requested: i64, bound: i64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("element is not divisible by {0} at its stored precision")]
    NotDivisible(String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("series did not converge within {max_index} terms")]
    NonConvergence { max_index: usize },
    #[error("ring is not a chain ring: {0}")]
    NotChainRing(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("enhancement check failed: {0}")]
    NotEnhanced(String),
    #[error("operators do not commute: {0}")]
    NonCommuting(String),
    #[error("operator is not nilpotent/unipotent: {0}")]
    NotNilpotent(String),
    #[error("composite of consecutive differentials is nonzero at degree {degree}")]
    NotAComplex { degree: usize },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
