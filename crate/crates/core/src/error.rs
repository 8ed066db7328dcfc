use std::fmt;

/// Resource-cap overrun. Carries the last fully completed stage (ball
/// radius, walk power, ...) so callers can report partial progress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceError {
    pub what: String,
    pub cap: u64,
    pub last_completed: Option<u64>,
}

impl fmt::Display for ResourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cap of {} exceeded", self.what, self.cap)?;
        if let Some(n) = self.last_completed {
            write!(f, " (last completed: {n})")?;
        }
        Ok(())
    }
}

impl std::error::Error for ResourceError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("weight mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid generating set: {0}")]
    InvalidGenSet(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn resource(what: &str, cap: u64, last_completed: Option<u64>) -> Self {
        Error::Resource(ResourceError {
            what: what.to_string(),
            cap,
            last_completed,
        })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
