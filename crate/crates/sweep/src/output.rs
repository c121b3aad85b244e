//! CSV, JSON and manifest writers. Output bytes depend only on the records and the config.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};
use crate::record::{SweepRecord, SCHEMA_VERSION};

pub const TOOL: &str = "polsweep";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: &'static str,
    pub command: String,
    pub rows: usize,
    pub columns: Vec<&'static str>,
    /// Swept axes in nesting order (first outermost).
    pub grid: Vec<(String, Vec<f64>)>,
    pub config: RunConfig,
    pub files: Vec<FileEntry>,
    pub notes: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn csv_bytes(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(SweepRecord::columns())?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn json_bytes(records: &[SweepRecord]) -> Result<Vec<u8>> {
    let arr = Value::Array(records.iter().map(SweepRecord::json).collect());
    let mut out = serde_json::to_vec_pretty(&arr)?;
    out.push(b'\n');
    Ok(out)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileEntry> {
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(FileEntry { name: name.to_string(), bytes: bytes.len() as u64, sha256: sha256_hex(bytes) })
}

/// Writes `<stem>.csv` and/or `<stem>.json` plus `<stem>.manifest.json` into the configured
/// directory. Returns the manifest path.
pub fn write_outputs(
    cfg: &RunConfig,
    stem: &str,
    command: &str,
    records: &[SweepRecord],
    notes: Vec<String>,
) -> Result<PathBuf> {
    let dir = &cfg.outputs.dir;
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut files = Vec::new();
    if cfg.wants(Format::Csv) {
        files.push(write(dir, &format!("{stem}.csv"), &csv_bytes(records)?)?);
    }
    if cfg.wants(Format::Json) {
        files.push(write(dir, &format!("{stem}.json"), &json_bytes(records)?)?);
    }
    let manifest = Manifest {
        tool: TOOL,
        version: VERSION,
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        rows: records.len(),
        columns: SweepRecord::columns(),
        grid: cfg.sweep.active().into_iter().map(|(n, a)| (n.to_string(), a.values())).collect(),
        config: cfg.clone(),
        files,
        notes,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    let name = format!("{stem}.manifest.json");
    write(dir, &name, &bytes)?;
    Ok(dir.join(name))
}
