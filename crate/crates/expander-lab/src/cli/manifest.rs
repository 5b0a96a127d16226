use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Written next to the outputs of every run with `--out`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: serde_json::Value,
    pub seed: u64,
    pub version: &'static str,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_time_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest_file(path: &Path) -> Result<FileDigest, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(FileDigest { path: path.display().to_string(), sha256: sha256_hex(&bytes) })
}

/// Where a run's files go. A path with an extension that is not an existing
/// directory names the primary output; everything else is a directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutTarget {
    Dir(PathBuf),
    File(PathBuf),
}

impl OutTarget {
    pub fn from_path(p: &Path) -> Self {
        if p.is_dir() || p.extension().is_none() {
            Self::Dir(p.to_path_buf())
        } else {
            Self::File(p.to_path_buf())
        }
    }

    fn dir(&self) -> &Path {
        match self {
            Self::Dir(d) => d,
            Self::File(f) => f.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new(".")),
        }
    }

    /// Path of the primary artifact named `name`.
    pub fn primary(&self, name: &str) -> PathBuf {
        match self {
            Self::Dir(d) => d.join(name),
            Self::File(f) => f.clone(),
        }
    }

    /// Path of a secondary artifact: inside the directory, or
    /// `<stem>.<name>` beside the primary file.
    pub fn secondary(&self, name: &str) -> PathBuf {
        match self {
            Self::Dir(d) => d.join(name),
            Self::File(f) => {
                let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                self.dir().join(format!("{stem}.{name}"))
            }
        }
    }

    pub fn manifest(&self) -> PathBuf {
        self.secondary("manifest.json")
    }

    pub fn prepare(&self) -> Result<(), CliError> {
        let d = self.dir();
        fs::create_dir_all(d).map_err(|e| CliError::io(d, e))
    }
}
