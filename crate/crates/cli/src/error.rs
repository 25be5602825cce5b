use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATIONS: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const LIBRARY: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Library(#[from] qpurify_core::Error),

    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),

    #[error("write error: {0}")]
    Write(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => exit::CONFIG,
            Self::Library(_) => exit::LIBRARY,
            Self::Io(..) | Self::Write(_) => exit::IO,
        }
    }
}
