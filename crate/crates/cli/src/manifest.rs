//! Per-invocation record of what ran, with which configuration, and what
//! it wrote.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    /// SHA-256 of the compact JSON of `config`.
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tool_version: String,
    pub threads: Option<String>,
    pub wall_time_s: f64,
    /// Command-specific summary.
    pub results: serde_json::Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects manifest fields while a command runs.
pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, argv: &[String], config: impl Serialize) -> Result<Self, CliError> {
        let config = serde_json::to_value(config).map_err(|e| CliError::Internal(e.to_string()))?;
        let compact = serde_json::to_vec(&config).map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(Self {
            manifest: RunManifest {
                command: command.into(),
                argv: argv.to_vec(),
                config_sha256: sha256_hex(&compact),
                config,
                seeds: BTreeMap::new(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                tool_version: TOOL_VERSION.into(),
                threads: std::env::var(pecl_core::parallel::THREADS_ENV).ok(),
                wall_time_s: 0.0,
                results: serde_json::Value::Null,
            },
            started: Instant::now(),
        })
    }

    pub fn seed(&mut self, name: &str, seed: u64) -> &mut Self {
        self.manifest.seeds.insert(name.into(), seed);
        self
    }

    pub fn input(&mut self, p: &Path) -> &mut Self {
        self.manifest.inputs.push(p.display().to_string());
        self
    }

    pub fn output(&mut self, p: &Path) -> &mut Self {
        self.manifest.outputs.push(p.display().to_string());
        self
    }

    pub fn results(&mut self, v: impl Serialize) -> &mut Self {
        self.manifest.results = serde_json::to_value(v).unwrap_or(serde_json::Value::Null);
        self
    }

    pub fn finish(mut self) -> RunManifest {
        self.manifest.wall_time_s = self.started.elapsed().as_secs_f64();
        self.manifest
    }

    /// Finishes and writes the manifest to `path`, or logs it when there is
    /// no output location.
    pub fn emit(self, path: Option<PathBuf>) -> Result<RunManifest, CliError> {
        let m = self.finish();
        let text = serde_json::to_string_pretty(&m).map_err(|e| CliError::Internal(e.to_string()))?;
        match path {
            Some(p) => std::fs::write(&p, text).map_err(|e| CliError::write(&p, e))?,
            None => log::info!("manifest: {}", serde_json::to_string(&m).unwrap_or_default()),
        }
        Ok(m)
    }
}

/// Manifest path for a directory output.
pub fn in_dir(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

/// Manifest path for a single-file output `x.ext`: `x.manifest.json`.
pub fn beside(file: &Path) -> PathBuf {
    file.with_extension("manifest.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn config_hash_tracks_content() {
        let a = ManifestBuilder::new("x", &[], serde_json::json!({"a": 1})).unwrap().finish();
        let b = ManifestBuilder::new("x", &[], serde_json::json!({"a": 2})).unwrap().finish();
        assert_ne!(a.config_sha256, b.config_sha256);
        assert_eq!(a.config_sha256, sha256_hex(br#"{"a":1}"#));
    }

    #[test]
    fn manifest_paths() {
        assert_eq!(beside(Path::new("o/scene.dat")), Path::new("o/scene.manifest.json"));
        assert_eq!(in_dir(Path::new("run")), Path::new("run/manifest.json"));
    }
}
