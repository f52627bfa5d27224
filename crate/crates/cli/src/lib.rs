//! Command-line front end for `asd-forge-core`: configuration, the parallel suite runner
//! and report rendering. The binary in `main.rs` is a thin clap wrapper over this.

pub mod commands;
pub mod config;
pub mod report;
pub mod runner;

use std::path::Path;

use thiserror::Error;

pub use config::{FileConfig, Format, Overrides, RunConfig};
pub use report::{Entry, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] asd_forge_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Writes `report` to `path` (or stdout for `None` / `-`).
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let text = report.render(format)?;
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text)?,
        _ => print!("{text}"),
    }
    Ok(())
}
