use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("word of length {len} is shorter than the required {required} symbols")]
    WordTooShort { len: usize, required: usize },

    #[error("symbol {value} at position {pos} is not 0 or 1")]
    NotBinary { value: u8, pos: usize },

    #[error("table of length {len} cannot back a depth-{depth} function (need {expected} entries)")]
    TableSize { len: usize, depth: usize, expected: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("depth {depth} exceeds the enumeration cap of {cap}")]
    DepthTooLarge { depth: usize, cap: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
