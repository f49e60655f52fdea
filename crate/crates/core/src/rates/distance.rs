//! Total-variation distances and gradient norms from lattice densities.

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{compile_for, density, density_with, shifted, DensityGrid, GridSpec};
use crate::error::{LevyError, Result};
use crate::symbol::{LevyModel, PhiProfile, SymbolSource};

/// Largest admissible shift as a fraction of the half-width L.
pub const SHIFT_LIMIT_FRACTION: f64 = 0.25;

/// `‖P_t(x,·) − P_t(x+shift,·)‖_TV = ½∫|p(y) − p(y − shift)|dy`, with the
/// shift in grid coordinates. Values lie in [0, 1].
pub fn tv_distance(dg: &DensityGrid, shift: &[f64]) -> Result<f64> {
    if !dg.is_density() {
        return Err(LevyError::InvalidArgument("tv_distance needs a β = 0 grid".into()));
    }
    if shift.len() != dg.grid.dim {
        return Err(LevyError::InvalidArgument(format!(
            "shift has {} components for a {}-dimensional grid",
            shift.len(),
            dg.grid.dim
        )));
    }
    let size = shift.iter().map(|s| s * s).sum::<f64>().sqrt();
    let limit = SHIFT_LIMIT_FRACTION * dg.grid.l;
    if !(size < limit) {
        return Err(LevyError::ShiftTooLarge { shift: size, limit });
    }
    if size == 0.0 {
        return Ok(0.0);
    }
    let q = shifted(dg, shift);
    let lattice = if dg.grid.dim == 1 {
        let diff: Vec<f64> = dg.closed_values().iter().zip(q.iter()).map(|(a, b)| a - b).collect();
        abs_integral(&diff, dg.grid.dy())
    } else {
        dg.values.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>() * dg.grid.cell()
    };
    let outside = match (&dg.aux.tail, dg.meta.rescale == 1.0) {
        (Some(tail), true) => {
            let d = shift[0];
            tail.outside_integral(dg.grid.l, |y| {
                let a = dg.tail_density(y).unwrap_or(0.0);
                let b = dg.tail_density(y - d).unwrap_or(0.0);
                (a - b).abs()
            })?
        }
        _ => 0.0,
    };
    Ok((0.5 * (lattice + outside)).clamp(0.0, 1.0))
}

/// `∫|∇p_t(z)|dz` on the lattice (Euclidean norm of the gradient).
pub fn grad_norm(source: &SymbolSource<'_>, t: f64, grid: &GridSpec) -> Result<f64> {
    let sym = compile_for(source, grid)?;
    if grid.dim == 1 {
        let dg = density_with(&sym, source, t, grid, [1, 0])?;
        let inside = abs_integral(&dg.closed_values(), grid.dy());
        // Beyond the window the density is monotone, so ∫|p'| = p(±L).
        let outside = match (dg.tail_density(grid.l), dg.tail_density(-grid.l)) {
            (Some(a), Some(b)) if dg.diagnostics.image_corrected => a + b,
            _ => 0.0,
        };
        Ok(inside + outside)
    } else {
        let a = density_with(&sym, source, t, grid, [1, 0])?;
        let b = density_with(&sym, source, t, grid, [0, 1])?;
        Ok(a.values.iter().zip(b.values.iter()).map(|(x, y)| x.hypot(*y)).sum::<f64>() * grid.cell())
    }
}

/// `∫_{−L}^{L}|f|` from samples at the N + 1 closed-window nodes. Each
/// cell integrates the absolute value of the cubic through the four nearest
/// samples, so sign changes cost no order of accuracy.
fn abs_integral(v: &[f64], dx: f64) -> f64 {
    let cells = v.len() - 1;
    let mut s = 0.0;
    for j in 0..cells {
        let c = if j >= 1 && j + 2 <= cells {
            let (a, b, c, d) = (v[j - 1], v[j], v[j + 1], v[j + 2]);
            [
                b,
                -a / 3.0 - b / 2.0 + c - d / 6.0,
                a / 2.0 - b + c / 2.0,
                -a / 6.0 + b / 2.0 - c / 2.0 + d / 6.0,
            ]
        } else {
            let start = if j == 0 { 0 } else { cells - 3 };
            lagrange_cubic(&v[start..start + 4], start as f64 - j as f64)
        };
        s += abs_cubic_cell(c);
    }
    s * dx
}

/// Power-basis coefficients of the cubic through `(x0 + i, y_i)`.
fn lagrange_cubic(y: &[f64], x0: f64) -> [f64; 4] {
    let xs: Vec<f64> = (0..4).map(|i| x0 + i as f64).collect();
    let mut out = [0.0; 4];
    for i in 0..4 {
        let mut poly = [1.0, 0.0, 0.0, 0.0];
        let mut denom = 1.0;
        for k in (0..4).filter(|&k| k != i) {
            // poly *= (x − x_k)
            for d in (1..4).rev() {
                poly[d] = poly[d - 1] - xs[k] * poly[d];
            }
            poly[0] *= -xs[k];
            denom *= xs[i] - xs[k];
        }
        for d in 0..4 {
            out[d] += y[i] * poly[d] / denom;
        }
    }
    out
}

/// `∫_0^1 |c0 + c1 x + c2 x² + c3 x³| dx`.
fn abs_cubic_cell(c: [f64; 4]) -> f64 {
    let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * c[3]));
    let anti = |x: f64| x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * c[3] / 4.0)));
    // Split at critical points so each piece is monotone.
    let mut cuts = vec![0.0];
    let (qa, qb, qc) = (3.0 * c[3], 2.0 * c[2], c[1]);
    if qa.abs() > 0.0 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let r = disc.sqrt();
            for x in [(-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa)] {
                if x > 0.0 && x < 1.0 {
                    cuts.push(x);
                }
            }
        }
    } else if qb != 0.0 {
        let x = -qc / qb;
        if x > 0.0 && x < 1.0 {
            cuts.push(x);
        }
    }
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    let mut pts = vec![0.0];
    for w in cuts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (p(lo), p(hi));
        if flo * fhi < 0.0 {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (p(mid) < 0.0) == (flo < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            pts.push(0.5 * (lo + hi));
        }
    }
    pts.push(1.0);
    pts.windows(2).map(|w| (anti(w[1]) - anti(w[0])).abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_integral_of_sine_and_cubic_pieces() {
        let n = 200;
        let dx = 2.0 * std::f64::consts::PI / n as f64;
        let v: Vec<f64> = (0..=n).map(|j| (j as f64 * dx).sin()).collect();
        let got = abs_integral(&v, dx);
        assert!((got - 4.0).abs() < 1e-6, "{got}");
        let c = lagrange_cubic(&[1.0, 8.0, 27.0, 64.0], 1.0);
        for (a, b) in c.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FactorizationGap {
    pub tv_full: f64,
    pub tv_truncated: f64,
}

impl FactorizationGap {
    /// `tv_full ≤ tv_truncated + slack`.
    pub fn holds(&self, slack: f64) -> bool {
        self.tv_full <= self.tv_truncated + slack
    }
}

/// TV distances of the full and the r-truncated laws for the same shift.
pub fn factorization_gap(model: &LevyModel, r: f64, t: f64, grid: &GridSpec, shift: &[f64]) -> Result<FactorizationGap> {
    let full = density(&SymbolSource::full(model), t, grid, [0, 0])?;
    let trunc = density(&SymbolSource::truncated(model, r), t, grid, [0, 0])?;
    Ok(FactorizationGap { tv_full: tv_distance(&full, shift)?, tv_truncated: tv_distance(&trunc, shift)? })
}

/// Grid parameters pinned by the caller; unset fields are sized
/// automatically from the profile.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct GridOverride {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
}

impl GridOverride {
    pub fn resolve(&self, dim: usize, t: f64, profile: &PhiProfile) -> Result<GridSpec> {
        GridSpec::resolve(dim, t, profile, self.n, self.l)
    }
}

/// Profile covering the natural scales of the times in `ts`.
pub fn profile_for(model: &LevyModel, ts: &[f64]) -> Result<PhiProfile> {
    let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().cloned().fold(0.0, f64::max);
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(LevyError::InvalidArgument("times must be positive and finite".into()));
    }
    PhiProfile::covering(model, 1.0 / hi, 1.0 / lo)
}

/// `(t, TV)` over the times, each on its own grid.
pub fn tv_sweep(model: &LevyModel, ts: &[f64], shift: &[f64], grid: GridOverride) -> Result<Vec<(f64, f64)>> {
    let profile = profile_for(model, ts)?;
    let source = SymbolSource::full(model);
    ts.par_iter()
        .map(|&t| {
            let g = grid.resolve(model.dim(), t, &profile)?;
            let dg = density(&source, t, &g, [0, 0])?;
            Ok((t, tv_distance(&dg, shift)?))
        })
        .collect()
}

/// `(t, ∫|∇p_t|)` over the times, each on its own grid.
pub fn grad_sweep(model: &LevyModel, ts: &[f64], grid: GridOverride) -> Result<Vec<(f64, f64)>> {
    let profile = profile_for(model, ts)?;
    let source = SymbolSource::full(model);
    ts.par_iter()
        .map(|&t| {
            let g = grid.resolve(model.dim(), t, &profile)?;
            Ok((t, grad_norm(&source, t, &g)?))
        })
        .collect()
}
