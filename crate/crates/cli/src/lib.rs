//! Library side of the `biqpca` command-line tool: configuration parsing and
//! the four pipeline commands. `main.rs` only does argument parsing.

pub mod commands;
pub mod config;

pub use commands::{cmd_fit, cmd_recognize, cmd_reconstruct, cmd_select_weighting, RecognizeOutputs, ReconstructOutputs};
pub use config::{load_config, parse_config, Config};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),
    #[error(transparent)]
    Run(#[from] biqpca::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for anything the user can fix in the config or arguments, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Run(biqpca::Error::InvalidParameter(_)) => 2,
            _ => 1,
        }
    }
}
