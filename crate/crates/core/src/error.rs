use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inputs whose dimensions do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A linear system without a unique solution.
    #[error("singular system")]
    Singular,

    /// A vanishing determinant or other coincidence excluded by genericity.
    #[error("non-generic input: {0}")]
    Genericity(String),

    /// An operation was called outside its domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Text that does not follow the expected grammar.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// A computed object contradicts a proven structural property.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
