//! File output for density grids.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::lattice::DensityGrid;
use crate::error::{LevyError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub dim: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub t: f64,
    pub beta: Vec<u32>,
    pub mass: Option<f64>,
}

impl Sidecar {
    pub fn of(dg: &DensityGrid) -> Self {
        Sidecar {
            dim: dg.grid.dim,
            n: dg.grid.n,
            l: dg.grid.l,
            t: dg.t,
            beta: dg.meta.beta[..dg.grid.dim].to_vec(),
            mass: dg.diagnostics.mass,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> LevyError {
    LevyError::InvalidArgument(format!("{}: {e}", path.display()))
}

/// Sidecar path for a binary export: `out.bin` → `out.bin.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the values as little-endian f64, row-major, plus a JSON sidecar.
pub fn write_binary(dg: &DensityGrid, path: &Path) -> Result<PathBuf> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for v in &dg.values {
        w.write_all(&v.to_le_bytes()).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    let side = sidecar_path(path);
    let text = serde_json::to_string_pretty(&Sidecar::of(dg)).expect("sidecar serializes");
    std::fs::write(&side, text + "\n").map_err(|e| io_err(&side, e))?;
    Ok(side)
}

/// `y,p` rows for a one-dimensional grid.
pub fn write_csv<W: Write>(dg: &DensityGrid, mut w: W) -> Result<()> {
    if dg.grid.dim != 1 {
        return Err(LevyError::InvalidArgument("CSV export needs a one-dimensional grid".into()));
    }
    let fail = |e: std::io::Error| LevyError::InvalidArgument(format!("csv write: {e}"));
    writeln!(w, "y,p").map_err(fail)?;
    for (j, v) in dg.values.iter().enumerate() {
        writeln!(w, "{},{}", dg.grid.y(j), v).map_err(fail)?;
    }
    Ok(())
}
