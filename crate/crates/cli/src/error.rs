use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid input or a violated invariant (exit 1).
    #[error("{0}")]
    Invalid(String),
    /// I/O or parse failure (exit 2).
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
