use thiserror::Error;

/// A single sample-path invariant violation, reported by `validate_path`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "index {}: {}", self.index, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("invalid path: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 numeric/domain, 4 validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Argument(_) | Error::Model(_) => 2,
            Error::Domain(_) | Error::Numeric(_) => 3,
            Error::Validation(_) => 4,
            Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
