use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("ragged input: string {index} has length {found}, expected {expected}")]
    Ragged {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("pattern length {len} is not in 1..={n}")]
    BadLength { len: usize, n: usize },

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("{oracle} oracle refused: {required} candidates exceed budget {budget}")]
    BudgetExceeded {
        oracle: &'static str,
        required: u128,
        budget: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("stored cost {stored} does not match recomputed cost {actual}")]
    CostMismatch { stored: u64, actual: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
