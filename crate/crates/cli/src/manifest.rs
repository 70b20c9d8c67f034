//! Run manifests: what was run, with which parameters, and what it wrote.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name; replaying them reproduces the
    /// outputs byte for byte.
    pub argv: Vec<String>,
    pub params: Value,
    pub rng_seed: Option<u64>,
    pub version: String,
    pub report: Value,
    pub outputs: Vec<OutputRecord>,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[OsString], params: Value, rng_seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_owned(),
            argv: argv
                .iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned())
                .collect(),
            params,
            rng_seed,
            version: VERSION.to_owned(),
            report: json!({}),
            outputs: Vec::new(),
        }
    }

    /// The part embedded in JSON result files. Leaves out argv and outputs,
    /// which depend on where the files go.
    pub fn meta(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "rng_seed": self.rng_seed,
            "version": self.version,
        })
    }

    pub fn report(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.report {
            map.insert(key.to_owned(), value);
        }
    }

    /// Writes `bytes` to `path` and records its checksum.
    pub fn write_output(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        fs::write(path, bytes).map_err(|e| CliError::file(path, e))?;
        self.outputs.push(OutputRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        fs::write(path, bytes).map_err(|e| CliError::file(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::file(path, e))?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    /// Whether every recorded output still has its recorded checksum.
    pub fn verify(&self) -> Result<bool, CliError> {
        for out in &self.outputs {
            let bytes = fs::read(&out.path).map_err(|e| CliError::file(&out.path, e))?;
            if sha256_hex(&bytes) != out.sha256 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `<output>.manifest.json` next to the result file.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
