use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Arguments outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters below a theorem's guaranteed range.
    #[error("range error: {0}")]
    Range(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("scalars from different fields mixed in one computation")]
    MixedScalars,

    #[error("no verified system after {attempts} attempts")]
    SearchFailure { attempts: u32 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    /// An internal cross-check disagreed; this signals a bug or a
    /// contradiction with a proven identity, never bad user input.
    #[error("internal cross-check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
