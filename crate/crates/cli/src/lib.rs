//! Scenario-driven front end producing CSV tables.

pub mod commands;
pub mod format;
pub mod scenario;

pub use commands::{run_command, Command, CommandOutput, Options};
pub use format::Precision;
pub use scenario::Scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid scenario; one entry per problem, addressed by field path.
    #[error("{}", .0.join("\n"))]
    Config(Vec<String>),
    #[error(transparent)]
    Numeric(#[from] ruin_core::Error),
    #[error("{0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub(crate) fn field(path: &str, message: &str) -> Self {
        CliError::Config(vec![format!("{path}: {message}")])
    }

    /// 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}
