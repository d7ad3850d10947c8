use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Inventory entry: output file path (relative to the run directory) and the
/// SHA-256 of its content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

/// Manifest of one experiment run. Data outputs are bit-reproducible for a
/// fixed config and seed; the wall-clock block is informational and excluded
/// from reproducibility comparisons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub version: String,
    /// Stage name -> wall-clock seconds.
    pub wall_clock: Vec<(String, f64)>,
    pub files: Vec<FileEntry>,
    /// A stage failed; completed outputs are preserved.
    pub degraded: bool,
    /// Per-stage status notes.
    pub stage_flags: Vec<(String, String)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    let mut s = String::with_capacity(64);
    for b in out {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

pub fn hash_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

impl RunManifest {
    pub fn new(config_hash: String) -> Self {
        Self {
            config_hash,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock: Vec::new(),
            files: Vec::new(),
            degraded: false,
            stage_flags: Vec::new(),
        }
    }

    pub fn record_file(&mut self, run_dir: &Path, rel: &str) -> Result<()> {
        let hash = hash_file(&run_dir.join(rel))?;
        self.files.push(FileEntry { path: rel.to_string(), sha256: hash });
        Ok(())
    }

    /// True when every listed file still exists with a matching hash.
    pub fn verify(&self, run_dir: &Path) -> bool {
        self.files.iter().all(|f| {
            hash_file(&run_dir.join(&f.path)).map(|h| h == f.sha256).unwrap_or(false)
        })
    }

    pub fn save(&self, run_dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(run_dir.join("manifest.json"), text)?;
        Ok(())
    }

    pub fn load(run_dir: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(run_dir.join("manifest.json"))?;
        serde_json::from_str(&text).map_err(|e| crate::error::Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            sha256_hex(b"quench"),
            sha256_hex(b"quench"),
        );
        assert_ne!(sha256_hex(b"a"), sha256_hex(b"b"));
    }

    #[test]
    fn verify_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("x.csv"), "1,2\n").unwrap();
        let mut m = RunManifest::new("abc".into());
        m.record_file(dir.path(), "x.csv").unwrap();
        assert!(m.verify(dir.path()));
        std::fs::write(dir.path().join("x.csv"), "3,4\n").unwrap();
        assert!(!m.verify(dir.path()));
    }
}
