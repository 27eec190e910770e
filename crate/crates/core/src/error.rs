use thiserror::Error;

/// Errors raised by the kernel. Each variant is a distinct diagnostic so the
/// command-line front end can map them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("letter {letter} is outside the alphabet [1..={size}]")]
    LetterOutOfRange { letter: u32, size: usize },

    #[error("word '{word}' has degree {degree}, beyond the truncation degree {max_deg}")]
    Truncation {
        word: String,
        degree: usize,
        max_deg: usize,
    },

    #[error("incompatible operands: {0}")]
    Mismatch(String),

    #[error("coefficient at '{0}' is not invertible")]
    NotInvertible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfBounds {
        what: &'static str,
        value: usize,
        range: String,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
