use crate::config::ConfigFile;
use crate::error::{CliError, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.toml";

/// Everything needed to repeat a run. Written before any computation; the
/// `config` table is itself a valid config file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: String,
    pub command: String,
    pub seed: u64,
    pub threads: usize,
    pub parallel: bool,
    pub timestamp: String,
    pub outputs: Vec<PathBuf>,
    pub config: ConfigFile,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, threads: usize, outputs: Vec<PathBuf>, config: ConfigFile) -> Self {
        Self {
            schema_version: erasure_qec::experiments::output::SCHEMA_VERSION,
            tool: format!("erasure-sim {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            seed,
            threads,
            parallel: erasure_qec::parallel::is_parallel(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs,
            config,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let text = toml::to_string(self).map_err(|e| CliError::Usage(format!("cannot serialise manifest: {e}")))?;
        std::fs::write(&path, text).map_err(CliError::io(format!("writing {}", path.display())))?;
        Ok(path)
    }
}
