use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Side file written next to every CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config_sha256: String,
    pub master_seed: u64,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub output: String,
}

pub fn config_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &[String], config_bytes: &[u8], master_seed: u64, output: &Path) -> Self {
        Self {
            command: command.to_vec(),
            config_sha256: config_hash(config_bytes),
            master_seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: 0.0,
            output: output
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
        }
    }

    /// `out.csv` -> `out.manifest.json`.
    pub fn path_for(csv: &Path) -> PathBuf {
        csv.with_extension("manifest.json")
    }

    pub fn write_next_to(&self, csv: &Path) -> CliResult<PathBuf> {
        let path = Self::path_for(csv);
        let mut body = serde_json::to_vec_pretty(self).expect("manifest serialises");
        body.push(b'\n');
        write_file(&path, &body)?;
        Ok(path)
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}
