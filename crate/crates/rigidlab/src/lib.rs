//! File formats, parallel verification suites and command implementations
//! on top of `rigidlab-core`.

pub mod commands;
pub mod format;
pub mod report;
pub mod suites;

use std::io;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or invalid input; exit code 2.
    #[error("invalid input: {0}")]
    Input(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    /// A computation on valid input failed; exit code 1.
    #[error("check failed: {0}")]
    Check(String),
}

impl Error {
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Check(_) => 1,
            _ => 2,
        }
    }
}
