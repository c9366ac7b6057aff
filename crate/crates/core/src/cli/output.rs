//! Output files and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::args::Command;
use crate::caps::Caps;
use crate::channels::SpecFile;
use crate::error::Result;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MANIFEST_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run. Worker count, output directory and
/// wall-clock times are left out on purpose so that replays match byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub caps: Caps,
    /// The channel spec as loaded, before model and alpha overrides.
    pub spec: SpecFile,
    pub command: Command,
    pub outputs: Vec<OutputDigest>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&super::commands::read_file(path)?)?)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Files of one run, kept in memory until [`Outputs::finish`] writes them
/// next to their manifest.
#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Self {
        Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.add(name, s);
        Ok(())
    }

    /// Adds the files of a finished sub-run under `prefix/`, with its manifest.
    pub fn add_nested(&mut self, prefix: &str, sub: Outputs, caps: &Caps, spec: &SpecFile, command: &Command) -> Result<()> {
        let manifest = sub.manifest_json(caps, spec, command)?;
        for (name, bytes) in sub.files {
            self.add(format!("{prefix}/{name}"), bytes);
        }
        self.add(format!("{prefix}/{MANIFEST_FILE}"), manifest);
        Ok(())
    }

    pub fn manifest_json(&self, caps: &Caps, spec: &SpecFile, command: &Command) -> Result<String> {
        let manifest = Manifest {
            schema_version: MANIFEST_SCHEMA,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            caps: *caps,
            spec: spec.clone(),
            command: command.clone(),
            outputs: self
                .files
                .iter()
                .map(|(name, bytes)| OutputDigest {
                    file: name.clone(),
                    sha256: sha256_hex(bytes),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&manifest)?;
        s.push('\n');
        Ok(s)
    }

    /// Writes every file and the manifest; returns the manifest path.
    pub fn finish(self, caps: &Caps, spec: &SpecFile, command: &Command) -> Result<PathBuf> {
        let manifest = self.manifest_json(caps, spec, command)?;
        fs::create_dir_all(&self.dir)?;
        for (name, bytes) in &self.files {
            let path = self.dir.join(name);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, bytes)?;
        }
        let path = self.dir.join(MANIFEST_FILE);
        fs::write(&path, manifest)?;
        Ok(path)
    }
}

/// CSV metadata block: `# key: value` lines followed by the column row.
pub fn csv_header(meta: &[(&str, String)], columns: &str) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(columns);
    out.push('\n');
    out
}

/// Quotes a CSV field when it contains a comma or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
