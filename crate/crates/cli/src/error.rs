//! CLI error taxonomy, mapped onto the documented exit codes:
//! 0 pass, 2 verification failure, 3 config error, 4 numerical
//! conditioning.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical conditioning: {0}")]
    Conditioning(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 2,
            CliError::Config(_) => 3,
            CliError::Conditioning(_) => 4,
            // treat io problems as config-level mistakes (bad paths)
            CliError::Io(_) => 3,
        }
    }
}

impl From<coulomb_core::Error> for CliError {
    fn from(e: coulomb_core::Error) -> Self {
        match e {
            coulomb_core::Error::Admissibility(min) => CliError::Verification(format!(
                "potential is not quasi-subharmonic: min f_V = {min}"
            )),
            coulomb_core::Error::SingularMatrix => {
                CliError::Conditioning("singular matrix in log-determinant".into())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
