//! CSV tables, checksums and the run report.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RawConfig;
use crate::error::{CliError, CliResult};

/// Version of every CSV and JSON layout written by this crate.
pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

/// A data table. Cells are preformatted so output bytes depend only on the
/// values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV bytes, preceded by a `# schema_version=…` comment line.
    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut buf = format!("# schema_version={OUTPUT_SCHEMA_VERSION} table={}\n", self.name).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let encode = |e: csv::Error| CliError::Io(format!("csv encoding: {e}"));
            w.write_record(&self.columns).map_err(encode)?;
            for row in &self.rows {
                w.write_record(row).map_err(encode)?;
            }
            w.flush().map_err(|e| CliError::io("csv encoding", e))?;
        }
        Ok(buf)
    }
}

/// Fixed-width scientific format for floating-point cells.
pub fn num(v: f64) -> String {
    format!("{v:.12e}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes `bytes` to `dir/name` and returns its checksum entry.
pub fn write_artifact(dir: &Path, name: &str, bytes: &[u8]) -> CliResult<Artifact> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::io(path.display(), e))?;
    Ok(Artifact {
        sha256: sha256_hex(bytes),
        bytes: bytes.len() as u64,
        path,
    })
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(format!("json encoding: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub scenario: &'static str,
    /// Resolved config in rad/s.
    pub config: RawConfig,
    /// Fixed step in seconds when `--dt` was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_override: Option<f64>,
    pub wall_time_s: f64,
    pub outputs: Vec<Artifact>,
    /// Headline numbers of the run.
    pub summary: serde_json::Value,
}
