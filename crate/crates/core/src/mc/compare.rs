//! Comparisons of sample sets with each other and with lattice densities.

use serde::Serialize;

use super::sampler::EmpiricalDist;
use crate::density::DensityGrid;
use crate::error::{LevyError, Result};

/// Smallest expected count per partition cell.
pub const MIN_CELL_COUNT: f64 = 5.0;

/// Partition estimate `½ Σ_cells |#a − #b| / n` of the TV distance. Cells
/// split the pooled 1%–99% quantile range regularly, plus one overflow cell
/// on each side; in d = 2 the partition is the product of per-axis ones
/// with about `n_cells` cells in total.
pub fn empirical_tv_lower(a: &EmpiricalDist, b: &EmpiricalDist, n_cells: usize) -> Result<f64> {
    if a.dim != b.dim || a.len() != b.len() {
        return Err(LevyError::InvalidArgument("sample sets differ in dimension or size".into()));
    }
    if (a.t - b.t).abs() > 1e-12 * a.t {
        return Err(LevyError::InvalidArgument(format!("sample times differ ({} vs {})", a.t, b.t)));
    }
    if n_cells < 3 {
        return Err(LevyError::InvalidArgument(format!("n_cells = {n_cells} below 3")));
    }
    let per_axis = if a.dim == 1 { n_cells } else { ((n_cells as f64).sqrt().round() as usize).max(3) };
    let edges: Vec<Vec<f64>> = (0..a.dim).map(|axis| axis_edges(a, b, axis, per_axis)).collect();
    let cell_of = |x: &[f64; 2]| -> usize {
        let mut idx = 0;
        for (axis, e) in edges.iter().enumerate() {
            // Cell k holds e[k-1] < x ≤ e[k]; 0 and len are overflow cells.
            idx = idx * (e.len() + 1) + e.partition_point(|&v| v < x[axis]);
        }
        idx
    };
    let total = edges.iter().map(|e| e.len() + 1).product();
    let mut ca = vec![0usize; total];
    let mut cb = vec![0usize; total];
    a.samples.iter().for_each(|x| ca[cell_of(x)] += 1);
    b.samples.iter().for_each(|x| cb[cell_of(x)] += 1);
    let n = a.len() as f64;
    let min_expected = ca.iter().zip(&cb).map(|(x, y)| 0.5 * (x + y) as f64).fold(f64::INFINITY, f64::min);
    if min_expected < MIN_CELL_COUNT {
        return Err(LevyError::InsufficientSamples(format!(
            "smallest pooled cell holds {min_expected:.1} expected samples (< {MIN_CELL_COUNT})"
        )));
    }
    let diff: usize = ca.iter().zip(&cb).map(|(x, y)| x.abs_diff(*y)).sum();
    Ok(0.5 * diff as f64 / n)
}

fn axis_edges(a: &EmpiricalDist, b: &EmpiricalDist, axis: usize, cells: usize) -> Vec<f64> {
    let mut pooled: Vec<f64> = a.samples.iter().chain(b.samples.iter()).map(|x| x[axis]).collect();
    pooled.sort_by(f64::total_cmp);
    let q = |p: f64| pooled[((pooled.len() - 1) as f64 * p).round() as usize];
    let (lo, hi) = (q(0.01), q(0.99));
    let inner = cells - 2;
    if hi <= lo {
        return vec![lo];
    }
    (0..=inner).map(|k| lo + (hi - lo) * k as f64 / inner as f64).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    /// `1.63/√n`, the 1% critical value.
    pub critical: f64,
    pub passed: bool,
}

/// One-sample Kolmogorov–Smirnov statistic of the first coordinates against
/// `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(dist: &EmpiricalDist, cdf: F) -> KsResult {
    let mut xs = dist.first();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    let critical = 1.63 / n.sqrt();
    KsResult { statistic: d, critical, passed: d < critical }
}

/// KS statistic against the CDF of a one-dimensional density grid. Beyond
/// the window the CDF follows the first-order tail `t·ν`, when the grid has
/// a tail model.
pub fn ks_against_grid(dist: &EmpiricalDist, dg: &DensityGrid) -> Result<KsResult> {
    let cdf = dg.cdf()?;
    let grid = dg.grid;
    let h = dg.meta.rescale;
    let dy = grid.dy();
    let edge = grid.l * h;
    let left = cdf[0] - dg.values[0] * dy;
    let tail = dg.aux.tail.as_ref();
    let off = dg.aux.offset;
    let outside = |x: f64| -> Option<f64> {
        let k = tail?;
        if x > edge && x + off > 0.0 {
            Some(1.0 - dg.t * k.tail_mass(x + off, true).ok()?)
        } else if x < -edge && x + off < 0.0 {
            Some(dg.t * k.tail_mass(-(x + off), false).ok()?)
        } else {
            None
        }
    };
    let f = |x: f64| {
        if let Some(v) = outside(x) {
            return v.clamp(0.0, 1.0);
        }
        // cdf[j] sits at the cell edge y_j + Δy/2 (grid units).
        let u = (x / h + grid.l) / dy - 0.5;
        if u < 0.0 {
            return left.max(0.0);
        }
        let j = u.floor() as usize;
        if j + 1 >= cdf.len() {
            return cdf[cdf.len() - 1].min(1.0);
        }
        let w = u - j as f64;
        cdf[j] + w * (cdf[j + 1] - cdf[j])
    };
    Ok(ks_statistic(dist, f))
}
