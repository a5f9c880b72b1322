//! Thin command-line adapter over the `twopiece` library.
//!
//! Exit codes: 0 on success, 2 for usage or configuration errors, 3 when a
//! numerical routine fails.

pub mod commands;
pub mod config;

use std::path::Path;

use thiserror::Error;

pub use commands::{run, Output};
pub use config::{Cli, Command, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<twopiece::Error> for CliError {
    fn from(e: twopiece::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Writes every file of `output`, creating parent directories as needed.
pub fn write_files(files: &[(std::path::PathBuf, String)]) -> Result<(), CliError> {
    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |source| CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
    for (path, text) in files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io(dir))?;
        }
        std::fs::write(path, text).map_err(io(path))?;
    }
    Ok(())
}
