//! Report files: deterministic JSON and CSV, every report carrying the
//! resolved configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Serialize)]
pub struct Gate {
    pub invariant: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Gate {
    pub fn new(invariant: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Gate { invariant, passed, detail: detail.into() }
    }
}

/// Top-level object shared by all reports.
pub fn envelope(command: &str, config: Value, body: Value, gates: &[Gate]) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": body,
        "gates": gates,
    })
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|_| CliError::config("out", format!("cannot create `{}`", dir.display())))?;
    let probe = dir.join(".levylab-write-probe");
    File::create(&probe).map_err(|_| CliError::config("out", format!("`{}` is not writable", dir.display())))?;
    let _ = std::fs::remove_file(&probe);
    Ok(dir.to_path_buf())
}

/// The first failed gate as an error, after the report is written.
pub fn check_gates(gates: &[Gate]) -> Result<(), CliError> {
    match gates.iter().find(|g| !g.passed) {
        Some(g) => Err(CliError::Gate { invariant: g.invariant.to_string(), detail: g.detail.clone() }),
        None => Ok(()),
    }
}
