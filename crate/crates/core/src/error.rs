use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Text input could not be parsed.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("letter x{letter} is not in the alphabet x0..x{max}")]
    InvalidLetter { letter: usize, max: usize },

    #[error("word {word} has length {len}, beyond truncation order {order}")]
    WordTooLong { word: String, len: usize, order: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("Taylor degree exhausted: {0}")]
    DegreeExhausted(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Json(String),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    pub fn dimension(message: impl Into<String>) -> Self {
        Error::Dimension(message.into())
    }

    /// Whether this error reports malformed input (as opposed to a
    /// dimension or precondition failure on well-formed input).
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::InvalidLetter { .. } | Error::Json(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(format!("malformed realization JSON: {err}"))
    }
}
