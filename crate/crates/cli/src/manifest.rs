//! Run manifest and serialized output writing.
//!
//! Every experiment writes its files through [`Outputs`], which records
//! name, size, and SHA-256 of each file, then seals the run with a
//! `manifest.json` written atomically (temp file + rename). Data files are
//! a pure function of (config, seed); the manifest additionally carries
//! wall-clock fields and is therefore excluded from byte-identity claims.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Checksum that ties every artifact of a run to its effective config:
/// SHA-256 over the config snapshot, the seed, and the artifact version.
/// It is computed before any output exists, so files (including SVGs, which
/// embed it as metadata) can carry it and still be listed in the manifest.
pub fn run_checksum(config_snapshot: &str, seed: u64, version: &str) -> String {
    let mut h = Sha256::new();
    h.update(config_snapshot.as_bytes());
    h.update(seed.to_le_bytes());
    h.update(version.as_bytes());
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub kind: String,
    pub label: String,
    pub version: String,
    pub seed: u64,
    pub run_checksum: String,
    pub started_unix_s: u64,
    pub elapsed_ms: u128,
    pub config: String,
    pub files: Vec<FileRecord>,
}

/// Collects the files of one run under a single directory.
pub struct Outputs {
    dir: PathBuf,
    kind: String,
    label: String,
    seed: u64,
    config_snapshot: String,
    checksum: String,
    files: Vec<FileRecord>,
    started_unix_s: u64,
    started: Instant,
}

impl Outputs {
    /// Creates the run directory (and parents) and fixes the run checksum.
    pub fn create(
        dir: PathBuf,
        kind: &str,
        label: &str,
        seed: u64,
        config_snapshot: String,
    ) -> Result<Self> {
        fs::create_dir_all(&dir).map_err(CliError::Output)?;
        let checksum = run_checksum(&config_snapshot, seed, env!("CARGO_PKG_VERSION"));
        let started_unix_s = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Ok(Outputs {
            dir,
            kind: kind.to_string(),
            label: label.to_string(),
            seed,
            config_snapshot,
            checksum,
            files: Vec::new(),
            started_unix_s,
            started: Instant::now(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn run_checksum(&self) -> &str {
        &self.checksum
    }

    /// Writes one file and records it for the manifest.
    pub fn write(&mut self, name: &str, content: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, content).map_err(CliError::Output)?;
        self.files.push(FileRecord {
            name: name.to_string(),
            bytes: content.len(),
            sha256: sha256_hex(content),
        });
        Ok(())
    }

    /// Seals the run: writes `manifest.json` atomically and returns the
    /// names of all emitted files.
    pub fn finish(self) -> Result<Vec<String>> {
        let manifest = RunManifest {
            kind: self.kind,
            label: self.label.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            run_checksum: self.checksum,
            started_unix_s: self.started_unix_s,
            elapsed_ms: self.started.elapsed().as_millis(),
            config: self.config_snapshot,
            files: self.files.clone(),
        };
        let json = serde_json::to_string_pretty(&manifest)
            .expect("manifest serialization cannot fail") + "\n";
        let tmp = self.dir.join(format!("{MANIFEST_NAME}.tmp"));
        fs::write(&tmp, json).map_err(CliError::Output)?;
        fs::rename(&tmp, self.dir.join(MANIFEST_NAME)).map_err(CliError::Output)?;
        let mut names: Vec<String> = self.files.into_iter().map(|f| f.name).collect();
        names.push(MANIFEST_NAME.to_string());
        Ok(names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_depends_on_all_inputs() {
        let a = run_checksum("cfg", 1, "0.1.0");
        assert_ne!(a, run_checksum("cfg2", 1, "0.1.0"));
        assert_ne!(a, run_checksum("cfg", 2, "0.1.0"));
        assert_ne!(a, run_checksum("cfg", 1, "0.2.0"));
        assert_eq!(a, run_checksum("cfg", 1, "0.1.0"));
        assert_eq!(a.len(), 64);
    }
}
