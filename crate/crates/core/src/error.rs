use thiserror::Error;

/// Errors raised by the library. Verdict-level failures (no snake, no loop)
/// are never errors; they are reported through [`crate::solvers::Decision`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter `{letter}` is not in the alphabet")]
    UnknownLetter { letter: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unknown group descriptor `{0}`")]
    UnknownGroup(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown tile `{0}`")]
    UnknownTile(String),

    #[error("size guard: {what} would produce {size} items (limit {limit})")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("unknown skeleton kind `{0}`")]
    UnknownSkeleton(String),

    #[error("skeleton audit failed: word `{0}` is not reduced in the group")]
    AuditFailed(String),

    #[error("invalid transducer: {0}")]
    InvalidTransducer(String),

    #[error("snake reconstruction failed at step {step}: {reason}")]
    Reconstruction { step: usize, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("certificate does not match the problem: {0}")]
    CertificateMismatch(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
