use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("size cap exceeded: {needed} cells requested but the cap is {cap}")]
    SizeCap { needed: u128, cap: u64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("partition is not supported for alphabet size q={q}")]
    UnsupportedAlphabet { q: u8 },

    #[error("partition error: {0}")]
    Partition(String),

    #[error("column star counts differ: column {first_col} has {first_count}, column {second_col} has {second_count}")]
    NonUniformStars {
        first_col: usize,
        first_count: usize,
        second_col: usize,
        second_count: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("integrity failure: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
