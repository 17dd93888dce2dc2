use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use emwave_core::io::{to_json, MANIFEST_SCHEMA};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub subcommand: &'static str,
    pub config_path: Option<String>,
    pub seed: u64,
    pub out_dir: String,
    pub tool_version: &'static str,
    /// SHA-256 of the effective configuration as written in `config.json`.
    pub config_sha256: String,
    pub outputs: BTreeMap<String, String>,
}

/// Collects output files and writes the manifest after all of them.
pub struct Outputs {
    dir: PathBuf,
    written: BTreeMap<String, String>,
}

impl Outputs {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            written: BTreeMap::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        self.written.insert(name.to_string(), sha256_hex(bytes));
        Ok(())
    }

    pub fn finish(
        mut self,
        subcommand: &'static str,
        config_path: Option<&Path>,
        seed: u64,
        config_json: &str,
    ) -> Result<(), CliError> {
        self.write("config.json", config_json.as_bytes())?;
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA,
            subcommand,
            config_path: config_path.map(|p| p.display().to_string()),
            seed,
            out_dir: self.dir.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION"),
            config_sha256: sha256_hex(config_json.as_bytes()),
            outputs: self.written.clone(),
        };
        let path = self.dir.join("manifest.json");
        fs::write(&path, to_json(&manifest))
            .map_err(|e| CliError::Io(path.display().to_string(), e))
    }
}
