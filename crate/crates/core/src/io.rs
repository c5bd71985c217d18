//! JSON documents on disk: instances, solutions, grouping plans, reports
//! and run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{validate_instance, Instance, Violation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{}: invalid instance: {}", path.display(), violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidInstance { path: PathBuf, violations: Vec<Violation> },
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.into(),
        source,
    })
}

/// Pretty-printed with a trailing newline. Parent directories are created.
pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value).map_err(|source| IoError::Json {
        path: path.into(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), IoError> {
    let path = path.as_ref();
    let io = |source| IoError::Io {
        path: path.into(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, text).map_err(io)
}

/// Reads an instance and rejects it if validation fails.
pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, IoError> {
    let path = path.as_ref();
    let inst: Instance = read_json(path)?;
    let violations = validate_instance(&inst);
    if violations.is_empty() {
        Ok(inst)
    } else {
        Err(IoError::InvalidInstance {
            path: path.into(),
            violations,
        })
    }
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Resolved parameters, including defaults that were not given.
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: impl Into<String>, parameters: serde_json::Value, seeds: Vec<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            parameters,
            seeds,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip_is_exact() {
        let inst = Instance::new(2, 3, 15.0, 240.0, 0.3, 2, vec![vec![0.1 + 0.2, 1.0 / 3.0, 97.123456789]]);
        let dir = std::env::temp_dir().join(format!("chemosched-io-{}", std::process::id()));
        let path = dir.join("inst.json");
        write_json(&path, &inst).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(back, inst);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_file() {
        assert!(matches!(read_json::<Instance>("/nonexistent/x.json"), Err(IoError::Io { .. })));
    }
}
