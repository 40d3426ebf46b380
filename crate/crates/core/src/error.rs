use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol {symbol} is outside the alphabet Z_{q}")]
    InvalidSymbol { symbol: u32, q: u32 },

    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("alphabet mismatch: Z_{left} vs Z_{right}")]
    AlphabetMismatch { left: u32, right: u32 },

    #[error("word of length {len} is shorter than the required {required}")]
    TooShort { len: usize, required: usize },

    #[error("words have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid length set: {0}")]
    InvalidLengthSet(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("words are not congruent")]
    NotCongruent,

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(usize),

    #[error("decoding failed: {0}")]
    Decode(String),

    #[error("incompatible parameters: {0}")]
    Incompatible(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
