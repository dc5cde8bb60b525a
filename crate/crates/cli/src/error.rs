use thiserror::Error;

/// Failures mapped onto exit codes: 1 verification, 2 configuration,
/// 3 numeric or pole failure.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Output paths come from the command line or the config file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<wickwave::Error> for CliError {
    fn from(e: wickwave::Error) -> Self {
        match e {
            wickwave::Error::Config(m) => CliError::Config(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}
