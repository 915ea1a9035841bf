//! Library side of the `dgtime` command-line tool: configuration, dispatch
//! and output writing.

pub mod config;
mod commands;
pub mod output;

use std::path::{Path, PathBuf};

pub use commands::{run, OrderAssertion, RunOutcome};
pub use config::{Command, ConfigError, RunConfig};
pub use output::RunManifest;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("core: {0}")]
    Core(#[from] dgtime_core::Error),
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Builds a config from defaults, an optional file, the output-directory
/// environment override and then flag overrides, in that order.
pub fn load_config(
    file: Option<&Path>,
    env_output_dir: Option<&str>,
    overrides: &[(String, String)],
) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        cfg.apply_all(&config::parse_entries(&text)?)?;
    }
    if let Some(dir) = env_output_dir.filter(|d| !d.is_empty()) {
        cfg.apply("output_dir", dir)?;
    }
    cfg.apply_all(overrides)?;
    Ok(cfg)
}
