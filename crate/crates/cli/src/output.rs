//! Run directory with a hashed manifest of everything written into it.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use spikeonet::data::sha256_hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    /// Relative to the run directory, `/`-separated.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug)]
pub struct RunDir {
    root: PathBuf,
    artifacts: Vec<Artifact>,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("cannot create {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes.as_ref()).with_context(|| format!("cannot write {}", path.display()))?;
        self.record(name)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text)
    }

    /// Adds a file that something else already wrote under the run directory.
    pub fn record(&mut self, name: &str) -> Result<()> {
        let bytes = fs::read(self.path(name)).with_context(|| format!("cannot read back {name}"))?;
        let entry = Artifact {
            path: name.to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        };
        match self.artifacts.iter_mut().find(|a| a.path == name) {
            Some(slot) => *slot = entry,
            None => self.artifacts.push(entry),
        }
        Ok(())
    }

    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    /// Writes `report.json` with the summary and the artifact manifest.
    pub fn finish(self, experiment: &str, seed: u64, summary: serde_json::Value) -> Result<RunReport> {
        let report = RunReport {
            experiment: experiment.to_string(),
            seed,
            summary,
            artifacts: self.artifacts,
        };
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        fs::write(self.root.join("report.json"), text)?;
        Ok(report)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub seed: u64,
    pub summary: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_hashes_match_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut run = RunDir::create(dir.path()).unwrap();
        run.write("a.txt", "abc").unwrap();
        run.write("sub/b.txt", "").unwrap();
        run.write("a.txt", "abc").unwrap();
        let report = run.finish("x", 1, serde_json::json!({})).unwrap();
        assert_eq!(report.artifacts.len(), 2);
        assert_eq!(
            report.artifacts[0].sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert!(dir.path().join("report.json").is_file());
    }
}
