//! Lattice Fourier inversion of `ξ ↦ (−iξ)^β e^{−tΦ(ξ)}`.
//!
//! With `y_j = −L + jΔy` and `ξ_k = kπ/L`,
//! `p(y_j) ≈ (Δξ/2π)^d Σ_k (−1)^{|k|} ê(ξ_k) e^{−2πi⟨k,j⟩/N}`,
//! which is a forward DFT of the sign-alternated spectrum.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use super::grid::{GridSpec, CUTOFF_DECAY};
use super::tail::{ImageCorrection, LineTail};
use crate::error::{LevyError, Result};
use crate::symbol::{CompiledSymbol, LevyModel, ModelKind, SymbolSource};

/// Largest allowed deviation of the β = 0 mass from 1 before the grid is
/// rejected.
pub const MASS_HARD_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct DensityMeta {
    pub symbol: String,
    /// Truncation radius, or None for the full symbol.
    pub truncation: Option<f64>,
    pub beta: [u32; 2],
    /// Spatial rescaling factor h (1 for plain densities).
    pub rescale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    /// `Σ p Δy^d` plus the modelled mass outside the window (β = 0 only).
    pub mass: Option<f64>,
    /// Largest imaginary part discarded after the transform.
    pub imag_residual: f64,
    /// First-order probability of leaving the window, when a Lévy density
    /// is available.
    pub wrap_mass: Option<f64>,
    /// Whether heavy-tail images were subtracted.
    pub image_corrected: bool,
    /// `t · min_θ Re Φ(Ξθ)`.
    pub cutoff_decay: f64,
    pub underresolved: bool,
    /// Smallest t for which the Hartman–Wintner ratio at Ξ exceeds d/t.
    pub hw_threshold: f64,
}

/// Density (or a derivative component) sampled on the lattice, row-major
/// with the first coordinate slowest.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub grid: GridSpec,
    pub t: f64,
    pub values: Vec<f64>,
    pub meta: DensityMeta,
    pub diagnostics: Diagnostics,
    pub(crate) aux: Aux,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Aux {
    pub(crate) tail: Option<LineTail>,
    /// Centering offset `t·b` applied to the tail model.
    pub(crate) offset: f64,
    /// The image sum subtracted from the values (same derivative order).
    pub(crate) images: Option<Arc<ImageCorrection>>,
}

impl DensityGrid {
    pub fn is_density(&self) -> bool {
        self.meta.beta == [0, 0]
    }

    /// Lattice coordinates of flat index `idx`.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let n = self.grid.n;
        if self.grid.dim == 1 {
            [self.grid.y(idx), 0.0]
        } else {
            [self.grid.y(idx / n), self.grid.y(idx % n)]
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Values on the closed window: for d = 1 the N lattice values followed
    /// by the value at `y = +L`, which differs from the one at `−L` once the
    /// images are removed. For d = 2 the lattice values.
    pub fn closed_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        if self.grid.dim == 1 {
            let l = self.grid.l;
            let jump = self.aux.images.as_ref().map_or(0.0, |c| c.at(-l) - c.at(l));
            v.push(self.values[0] + jump);
        }
        v
    }

    /// `t·k(y)` evaluated in physical units, or None without a tail model.
    pub(crate) fn tail_density(&self, y: f64) -> Option<f64> {
        self.aux.tail.as_ref().map(|k| self.t * k.density(y + self.aux.offset))
    }

    /// Cumulative distribution at the lattice cell edges `y_j + Δy/2`
    /// (d = 1, β = 0), including the modelled mass left of the window.
    pub fn cdf(&self) -> Result<Vec<f64>> {
        if self.grid.dim != 1 || !self.is_density() {
            return Err(LevyError::InvalidArgument("cdf needs a one-dimensional density grid".into()));
        }
        let h = self.meta.rescale;
        let l = self.grid.l * h;
        let left = match &self.aux.tail {
            Some(k) => self.t * k.tail_mass(l - self.aux.offset, false)?,
            None => 0.0,
        };
        let dy = self.grid.dy();
        let mut acc = left;
        Ok(self
            .values
            .iter()
            .map(|v| {
                acc += v * dy;
                acc
            })
            .collect())
    }
}

fn planner_fft(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

/// In-place d-dimensional transform of a row-major N^d buffer.
pub(crate) fn fft_nd(buf: &mut [Complex64], n: usize, dim: usize, inverse: bool) {
    let fft = planner_fft(n, inverse);
    if dim == 1 {
        fft.process(buf);
        return;
    }
    buf.par_chunks_mut(n).for_each(|row| fft.process(row));
    let mut cols = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            cols[j * n + i] = buf[i * n + j];
        }
    }
    cols.par_chunks_mut(n).for_each(|col| fft.process(col));
    for i in 0..n {
        for j in 0..n {
            buf[i * n + j] = cols[j * n + i];
        }
    }
}

fn sample_directions(dim: usize) -> Vec<[f64; 2]> {
    if dim == 1 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        (0..32)
            .map(|j| {
                let a = PI * j as f64 / 32.0;
                [a.cos(), a.sin()]
            })
            .collect()
    }
}

/// Smallest Re Φ over sampled directions at radius ρ.
pub(crate) fn min_re(sym: &CompiledSymbol, dim: usize, rho: f64) -> f64 {
    sample_directions(dim)
        .iter()
        .map(|d| {
            let xi = [rho * d[0], rho * d[1]];
            sym.re(&xi[..dim])
        })
        .fold(f64::INFINITY, f64::min)
}

fn check_request(model: &LevyModel, t: f64, grid: &GridSpec, beta: [u32; 2]) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(LevyError::InvalidArgument(format!("t = {t} must be positive")));
    }
    if grid.dim != model.dim() {
        return Err(LevyError::InvalidArgument(format!(
            "grid dimension {} differs from model dimension {}",
            grid.dim,
            model.dim()
        )));
    }
    if beta[0] + beta[1] > 4 || (grid.dim == 1 && beta[1] != 0) {
        return Err(LevyError::InvalidArgument(format!("derivative multi-index {beta:?} not supported")));
    }
    Ok(())
}

/// Compiles the source symbol for the frequencies of `grid`.
pub fn compile_for(source: &SymbolSource<'_>, grid: &GridSpec) -> Result<CompiledSymbol> {
    let reach = if grid.dim == 2 { std::f64::consts::SQRT_2 } else { 1.0 };
    source.compile(grid.dxi() * 0.5, grid.xi_max() * reach)
}

/// Transition density (β = 0) or derivative `∂^β p_t` of the source.
pub fn density(source: &SymbolSource<'_>, t: f64, grid: &GridSpec, beta: [u32; 2]) -> Result<DensityGrid> {
    check_request(source.model, t, grid, beta)?;
    let sym = compile_for(source, grid)?;
    density_with(&sym, source, t, grid, beta)
}

/// As [`density`], reusing a compiled symbol.
pub fn density_with(
    sym: &CompiledSymbol,
    source: &SymbolSource<'_>,
    t: f64,
    grid: &GridSpec,
    beta: [u32; 2],
) -> Result<DensityGrid> {
    check_request(source.model, t, grid, beta)?;
    let dim = grid.dim;
    let xi_max = grid.xi_max();

    let re_cut = min_re(sym, dim, xi_max);
    let ratio = re_cut / xi_max.ln_1p();
    let hw_threshold = if ratio > 0.0 { dim as f64 / ratio } else { f64::INFINITY };
    if t <= hw_threshold {
        return Err(LevyError::HwViolated { t, threshold: hw_threshold });
    }
    let cutoff_decay = t * re_cut;

    let n = grid.n;
    let dxi = grid.dxi();
    let order = beta[0] + beta[1];
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    buf.par_chunks_mut(n).enumerate().for_each(|(row, chunk)| {
        let k0 = if dim == 2 { grid.freq_index(row) } else { 0 };
        for (i, slot) in chunk.iter_mut().enumerate() {
            let k1 = grid.freq_index(i);
            let nyquist = i == n / 2 || (dim == 2 && row == n / 2);
            if nyquist && order > 0 {
                continue;
            }
            let (xi, ks): (Vec<f64>, i64) = if dim == 1 {
                (vec![k1 as f64 * dxi], k1)
            } else {
                (vec![k0 as f64 * dxi, k1 as f64 * dxi], k0 + k1)
            };
            let phi = sym.eval(&xi);
            let mut v = (-t * phi).exp();
            for (axis, &b) in beta.iter().take(dim).enumerate() {
                if b > 0 {
                    v *= Complex64::new(0.0, -xi[axis]).powu(b);
                }
            }
            *slot = if ks.rem_euclid(2) == 1 { -v } else { v };
        }
    });
    fft_nd(&mut buf, n, dim, false);
    let norm = (dxi / (2.0 * PI)).powi(dim as i32);
    let mut imag_residual: f64 = 0.0;
    let mut values: Vec<f64> = buf
        .iter()
        .map(|c| {
            imag_residual = imag_residual.max((c.im * norm).abs());
            c.re * norm
        })
        .collect();

    let mut aux = Aux::default();
    let mut image_corrected = false;
    let mut wrap_mass = None;
    if dim == 1 {
        if let Some(tail) = LineTail::of(source) {
            let offset = t * sym_drift(source.model);
            let l = grid.l;
            if let Some(corr) = ImageCorrection::new(&tail, t, l, offset, beta[0])? {
                for (j, v) in values.iter_mut().enumerate() {
                    *v -= corr.at(grid.y(j));
                }
                image_corrected = true;
                aux.images = Some(Arc::new(corr));
            }
            wrap_mass = Some(t * (tail.tail_mass(l + offset, true)? + tail.tail_mass(l - offset, false)?));
            aux.tail = Some(tail);
            aux.offset = offset;
        }
    } else if let ModelKind::Polar { spectral, family } = source.model.kind() {
        let radial = family.radial();
        let tm = match source.truncation {
            Some(r) if r <= grid.l => 0.0,
            _ => radial.tail_mass(grid.l).unwrap_or(f64::NAN),
        };
        wrap_mass = Some(t * spectral.total_mass() * tm);
    }

    let mass = if order == 0 {
        let inside: f64 = values.iter().sum::<f64>() * grid.cell();
        let outside = if image_corrected { wrap_mass.unwrap_or(0.0) } else { 0.0 };
        let m = inside + outside;
        if (m - 1.0).abs() > MASS_HARD_LIMIT {
            return Err(LevyError::GridUnderresolved(format!(
                "lattice mass {m:.6} deviates from 1 by more than {MASS_HARD_LIMIT:e}"
            )));
        }
        Some(m)
    } else {
        None
    };

    Ok(DensityGrid {
        grid: *grid,
        t,
        values,
        meta: DensityMeta {
            symbol: sym.label().to_string(),
            truncation: source.truncation,
            beta,
            rescale: 1.0,
        },
        diagnostics: Diagnostics {
            mass,
            imag_residual,
            wrap_mass,
            image_corrected,
            cutoff_decay,
            underresolved: cutoff_decay < CUTOFF_DECAY,
            hw_threshold,
        },
        aux,
    })
}

fn sym_drift(model: &LevyModel) -> f64 {
    model.drift()[0]
}

/// Values of the β = 0 grid translated by `shift` (physical units of the
/// grid), i.e. `y ↦ p(y − shift)`, using a spectral sub-lattice shift.
/// Laid out like [`DensityGrid::closed_values`].
pub(crate) fn shifted(dg: &DensityGrid, shift: &[f64]) -> Vec<f64> {
    let grid = dg.grid;
    let n = grid.n;
    let dim = grid.dim;
    let images = dg.aux.images.as_deref();
    let mut buf: Vec<Complex64> = dg
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let s = images.map_or(0.0, |c| c.at(grid.y(j)));
            Complex64::new(v + s, 0.0)
        })
        .collect();
    fft_nd(&mut buf, n, dim, false);
    let phase = |axis: usize, i: usize| -> Complex64 {
        let k = grid.freq_index(i) as f64;
        let arg = -PI * k * shift[axis] / grid.l;
        if i == n / 2 {
            Complex64::new(arg.cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, arg)
        }
    };
    if dim == 1 {
        for (i, c) in buf.iter_mut().enumerate() {
            *c *= phase(0, i);
        }
    } else {
        let p1: Vec<Complex64> = (0..n).map(|i| phase(1, i)).collect();
        for (row, chunk) in buf.chunks_mut(n).enumerate() {
            let p0 = phase(0, row);
            for (i, c) in chunk.iter_mut().enumerate() {
                *c *= p0 * p1[i];
            }
        }
    }
    fft_nd(&mut buf, n, dim, true);
    let scale = 1.0 / grid.len() as f64;
    let mut out: Vec<f64> = buf
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let s = images.map_or(0.0, |corr| corr.at(grid.y(j) - shift[0]));
            c.re * scale - s
        })
        .collect();
    if dim == 1 {
        let l = grid.l;
        let jump = images.map_or(0.0, |c| c.at(-l - shift[0]) - c.at(l - shift[0]));
        out.push(out[0] + jump);
    }
    out
}
