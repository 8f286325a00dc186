use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    /// A result fell outside its tolerance, or every row of a table failed.
    #[error("numerical check failed: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Usage(_) | CliError::Json(_) => 2,
            CliError::Io(_) => 2,
        }
    }
}

impl From<ab_phase::Error> for CliError {
    fn from(e: ab_phase::Error) -> Self {
        match e {
            ab_phase::Error::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
