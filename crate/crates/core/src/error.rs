use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty word has no positions")]
    EmptyWord,

    #[error("window [{lo}, {hi}] is too short: need {needed} entries")]
    WindowTooShort { lo: i64, hi: i64, needed: u64 },

    #[error("invalid window: lo {lo} > hi {hi}")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("column encoding requires finite alphabets")]
    NonFiniteAlphabet,

    #[error("{0} requires finite alphabet")]
    FiniteAlphabetRequired(&'static str),

    #[error("section of {rows}x{cols} exceeds the size cap of {cap} per side")]
    SectionTooLarge { rows: u64, cols: u64, cap: u64 },

    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: i64, hi: i64 },

    #[error("underdetermined section: {rows} rows < {cols} columns")]
    Underdetermined { rows: usize, cols: usize },

    #[error("operator is not self-adjoint")]
    NotSelfAdjoint,

    #[error("operator is not of Schroedinger form (band width 1, unit off-diagonals)")]
    NotSchroedinger,

    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
