use thiserror::Error;

/// CLI-level errors, each mapping to a process exit code: I/O failures exit
/// 1, validation failures exit 2. Numerical non-convergence is recorded
/// per-row and surfaces as exit 3 from the runner after output is written.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn validation(field: &str, message: String) -> Self {
        CliError::Validation(format!("{field}: {message}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
        }
    }
}
