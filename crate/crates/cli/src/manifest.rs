//! Run manifests: the command, its full parameter set, and digests of
//! every file it read and wrote. No timestamps or host state, so a re-run
//! with the same arguments byte-reproduces the manifest along with the
//! outputs it describes.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        RunManifest {
            tool: "rt-workbench",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            params: BTreeMap::new(),
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameters are plain data"),
        );
    }

    pub fn record_input(&mut self, path: &Path) -> anyhow::Result<()> {
        self.inputs.push(digest_file(path)?);
        Ok(())
    }

    pub fn record_output(&mut self, path: &Path) -> anyhow::Result<()> {
        self.outputs.push(digest_file(path)?);
        Ok(())
    }

    /// Writes `<stem>.manifest.json` next to the outputs.
    pub fn write(&self, dir: &Path, stem: &str) -> anyhow::Result<PathBuf> {
        let path = dir.join(format!("{stem}.manifest.json"));
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}

pub fn digest_file(path: &Path) -> anyhow::Result<FileDigest> {
    let data = fs::read(path)?;
    Ok(FileDigest {
        path: path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string()),
        sha256: hex_digest(&data),
        bytes: data.len() as u64,
    })
}

pub fn hex_digest(data: &[u8]) -> String {
    let mut out = String::with_capacity(64);
    for byte in Sha256::digest(data) {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}
