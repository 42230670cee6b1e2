use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("zero vector has no projector")]
    ZeroVector,

    #[error("matrix is not Hermitian at entry ({row},{col})")]
    NotHermitian { row: usize, col: usize },

    #[error("invalid rational {0:?}")]
    BadRational(String),

    #[error("row {row} ({label}): {reason}")]
    BadRow {
        row: usize,
        label: String,
        reason: String,
    },

    #[error("invalid channel: {0}")]
    BadChannel(String),

    #[error("message count {requested} outside 1..={available}")]
    MessageCount { requested: usize, available: usize },

    #[error("invalid basis set: {0}")]
    BadBasisSet(String),

    #[error("no partition of the candidate rays is a KS basis set")]
    NoKsPartition,

    #[error("ambiguous decode for output {output}: inputs {first} and {second} both survive")]
    AmbiguousDecode {
        output: String,
        first: String,
        second: String,
    },

    #[error("channel does not match basis set: {0}")]
    ProtocolMismatch(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("box is signalling: {0}")]
    Signalling(String),

    #[error("invalid game: {0}")]
    BadGame(String),

    #[error("invalid strategy: {0}")]
    BadStrategy(String),

    #[error("LP certificate mismatch: {0}")]
    Certificate(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
