//! Run manifests: every command records its resolved parameters, seeds,
//! input checksums, tool version, and a timestamp next to its outputs.
//! Everything except the timestamp is reproducible byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use gi_vqa_core::fsio::{sha256_file, write_atomic};

use crate::error::CliResult;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seeds: BTreeMap<String, u64>,
    pub input_checksums: BTreeMap<String, String>,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seeds: BTreeMap::new(),
            input_checksums: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn parameter(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, key: &str, value: u64) -> Self {
        self.seeds.insert(key.to_string(), value);
        self
    }

    pub fn input(mut self, path: &Path) -> CliResult<Self> {
        let checksum = sha256_file(path)?;
        self.input_checksums
            .insert(path.display().to_string(), checksum);
        Ok(self)
    }

    /// Write `run_manifest.json` (or a sibling `<out>.manifest.json` for
    /// single-file outputs) atomically.
    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        write_atomic(path, json.as_bytes())?;
        Ok(())
    }
}
