use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// CLI exit status: 1 for usage/parse problems, 2 for precondition failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) | Error::RingMismatch(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
