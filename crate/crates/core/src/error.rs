use thiserror::Error;

/// Every failure here is a caller mistake: bad lengths, indices or parameters.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input string is empty")]
    EmptyInput,

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid length: {0}")]
    InvalidLength(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("symbol {symbol} not below alphabet size {alphabet}")]
    SymbolOutOfAlphabet { symbol: u8, alphabet: usize },

    #[error("deterministic sample does not verify against the pattern")]
    InvalidSample,

    #[error("no deterministic sample stored for prefix length {0}")]
    MissingSample(usize),

    #[error("input length {len} exceeds the brute-force cap {cap}")]
    TooLarge { len: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
