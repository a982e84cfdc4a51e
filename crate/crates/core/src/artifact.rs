//! On-disk artifacts: staged atomic writes, content digests and schema
//! checks for the JSON documents passed between pipeline stages.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::SCHEMA_VERSION;

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}: artifact not found")]
    Missing(PathBuf),

    #[error("{path}: schema_version {found:?}, expected {expected:?}")]
    Schema {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("{path}: contents no longer match the recorded digest")]
    Tampered { path: PathBuf },
}

impl ArtifactError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ArtifactError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Files collected in memory and written together by [`Bundle::commit`].
#[derive(Debug, Default, Clone)]
pub struct Bundle {
    files: Vec<(String, Vec<u8>)>,
}

impl Bundle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a file. Names are relative to the output directory.
    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<Vec<u8>>) {
        let name = name.into();
        let contents = contents.into();
        match self.files.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = contents,
            None => self.files.push((name, contents)),
        }
    }

    pub fn extend(&mut self, other: Bundle) {
        for (name, contents) in other.files {
            self.add(name, contents);
        }
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Writes every file to a temporary sibling first and renames only once
    /// all of them are on disk. On failure the temporaries are removed and
    /// no target file is touched.
    pub fn commit(&self, dir: &Path) -> Result<Vec<PathBuf>, ArtifactError> {
        fs::create_dir_all(dir).map_err(|e| ArtifactError::io(dir, e))?;
        let pid = std::process::id();
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(self.files.len());
        let cleanup = |staged: &[(PathBuf, PathBuf)]| {
            for (tmp, _) in staged {
                let _ = fs::remove_file(tmp);
            }
        };
        for (name, contents) in &self.files {
            let target = dir.join(name);
            let tmp = dir.join(format!(".{name}.{pid}.tmp"));
            let written = fs::File::create(&tmp).and_then(|mut f| {
                f.write_all(contents)?;
                f.sync_all()
            });
            if let Err(e) = written {
                let _ = fs::remove_file(&tmp);
                cleanup(&staged);
                return Err(ArtifactError::io(tmp, e));
            }
            staged.push((tmp, target));
        }
        for (i, (tmp, target)) in staged.iter().enumerate() {
            if let Err(e) = fs::rename(tmp, target) {
                cleanup(&staged[i..]);
                return Err(ArtifactError::io(target, e));
            }
        }
        Ok(staged.into_iter().map(|(_, t)| t).collect())
    }
}

/// Reads a JSON artifact and checks its `schema_version`.
pub fn read_document(path: &Path) -> Result<Value, ArtifactError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(ArtifactError::Missing(path.to_path_buf()))
        }
        Err(e) => return Err(ArtifactError::io(path, e)),
    };
    let doc: Value = serde_json::from_str(&text).map_err(|e| ArtifactError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    check_schema(&doc, path)?;
    Ok(doc)
}

pub fn check_schema(doc: &Value, path: &Path) -> Result<(), ArtifactError> {
    let found = doc
        .get("schema_version")
        .and_then(Value::as_str)
        .unwrap_or("<missing>");
    if found != SCHEMA_VERSION {
        return Err(ArtifactError::Schema {
            path: path.to_path_buf(),
            found: found.to_string(),
            expected: SCHEMA_VERSION.to_string(),
        });
    }
    Ok(())
}

/// Compares files on disk against a `{name: sha256}` map.
pub fn verify_files(dir: &Path, digests: &serde_json::Map<String, Value>) -> Result<(), ArtifactError> {
    for (name, want) in digests {
        let path = dir.join(name);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(ArtifactError::Missing(path))
            }
            Err(e) => return Err(ArtifactError::io(path, e)),
        };
        if want.as_str() != Some(sha256_hex(&bytes).as_str()) {
            return Err(ArtifactError::Tampered { path });
        }
    }
    Ok(())
}
