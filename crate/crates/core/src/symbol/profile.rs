use std::f64::consts::PI;

use serde::Serialize;

use super::compiled::CompiledSymbol;
use super::model::{LevyModel, Window};
use crate::error::{LevyError, Result};

/// Relative allowance for the sampled sup over directions in d = 2.
pub const DIRECTION_MARGIN: f64 = 0.02;

/// Tabulated `φ(ρ) = sup_{|η|≤ρ} Re Φ(η)` on a log grid.
#[derive(Debug, Clone, Serialize)]
pub struct PhiProfile {
    rho: Vec<f64>,
    phi: Vec<f64>,
    directions: Vec<[f64; 2]>,
    margin: f64,
}

impl PhiProfile {
    /// Tabulates φ on `n_points` log-spaced radii; `n_directions` is used in
    /// d = 2 (d = 1 always samples ±1).
    pub fn new(model: &LevyModel, rho_min: f64, rho_max: f64, n_points: usize, n_directions: usize) -> Result<Self> {
        if !(rho_min > 0.0 && rho_max > rho_min && rho_max.is_finite()) {
            return Err(LevyError::InvalidArgument(format!(
                "profile range [{rho_min}, {rho_max}] must satisfy 0 < rho_min < rho_max"
            )));
        }
        if n_points < 16 {
            return Err(LevyError::InvalidArgument(format!("n_points = {n_points} must be at least 16")));
        }
        let directions: Vec<[f64; 2]> = if model.dim() == 1 {
            vec![[1.0, 0.0], [-1.0, 0.0]]
        } else {
            let k = n_directions.max(1);
            (0..k)
                .map(|j| {
                    let a = 2.0 * PI * j as f64 / k as f64;
                    [a.cos(), a.sin()]
                })
                .collect()
        };
        let sym = CompiledSymbol::new(model, Window::Full, rho_min, rho_max)?;
        // Re Φ is even, so half of the sampled circle suffices; isotropic
        // symbols need a single direction.
        let probe: Vec<[f64; 2]> = if model.is_isotropic() {
            vec![directions[0]]
        } else {
            directions.iter().take(directions.len().div_ceil(2)).copied().collect()
        };
        let step = (rho_max / rho_min).ln() / (n_points - 1) as f64;
        let mut rho = Vec::with_capacity(n_points);
        let mut phi = Vec::with_capacity(n_points);
        let mut running: f64 = 0.0;
        for i in 0..n_points {
            let r = if i == n_points - 1 { rho_max } else { rho_min * (step * i as f64).exp() };
            let mut best: f64 = 0.0;
            for d in &probe {
                let xi = [r * d[0], r * d[1]];
                best = best.max(sym.re(&xi[..model.dim()]));
            }
            running = running.max(best);
            rho.push(r);
            phi.push(running);
        }
        if !(phi[n_points - 1] > 0.0) {
            return Err(LevyError::DegenerateProfile);
        }
        let margin = if model.dim() == 2 && !model.is_isotropic() { DIRECTION_MARGIN } else { 0.0 };
        Ok(PhiProfile { rho, phi, directions, margin })
    }

    /// A profile whose φ-range contains `[s_lo, s_hi]`, widened a decade pair
    /// at a time (32 points per decade).
    pub fn covering(model: &LevyModel, s_lo: f64, s_hi: f64) -> Result<Self> {
        let (mut lo, mut hi) = (1e-2_f64, 1e2_f64);
        for _ in 0..12 {
            let points = (32.0 * (hi / lo).log10()).ceil() as usize + 1;
            let p = PhiProfile::new(model, lo, hi, points, 64)?;
            let (a, b) = p.range();
            let low_ok = a <= s_lo && a > 0.0;
            let high_ok = b >= s_hi;
            if low_ok && high_ok {
                return Ok(p);
            }
            if !low_ok {
                lo *= 1e-3;
            }
            if !high_ok {
                hi *= 1e3;
            }
        }
        Err(LevyError::OutOfRange {
            value: s_hi,
            lo: s_lo,
            hi: s_hi,
        })
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn values(&self) -> &[f64] {
        &self.phi
    }

    pub fn directions(&self) -> &[[f64; 2]] {
        &self.directions
    }

    /// Relative allowance for "≤ φ" comparisons (sampled sup is a lower bound).
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// `[φ(ρ_min), φ(ρ_max)]`.
    pub fn range(&self) -> (f64, f64) {
        (self.phi[0], self.phi[self.phi.len() - 1])
    }

    /// φ(ρ) by log–log interpolation; extrapolated with the end slopes.
    pub fn phi(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        let n = self.rho.len();
        let i = match self.rho.partition_point(|&r| r <= rho) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let (r0, r1) = (self.rho[i], self.rho[i + 1]);
        let (p0, p1) = (self.phi[i].max(1e-300), self.phi[i + 1].max(1e-300));
        let slope = (p1 / p0).ln() / (r1 / r0).ln();
        p0 * (slope * (rho / r0).ln()).exp()
    }

    /// φ⁻¹(s), the exact inverse of [`PhiProfile::phi`] on the table.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(s >= lo && s <= hi) || lo <= 0.0 {
            return Err(LevyError::OutOfRange { value: s, lo, hi });
        }
        let n = self.phi.len();
        // First node with φ ≥ s.
        let k = self.phi.partition_point(|&p| p < s).min(n - 1);
        if k == 0 || self.phi[k] == s {
            return Ok(self.rho[k]);
        }
        let i = k - 1;
        let (r0, r1) = (self.rho[i], self.rho[i + 1]);
        let (p0, p1) = (self.phi[i], self.phi[i + 1]);
        let slope = (p1 / p0).ln() / (r1 / r0).ln();
        Ok(r0 * ((s / p0).ln() / slope).exp())
    }

    /// `h(t) = 1/φ⁻¹(1/t)`.
    pub fn h_of_t(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(LevyError::InvalidArgument(format!("t = {t} must be positive")));
        }
        Ok(1.0 / self.inverse(1.0 / t)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HwReport {
    pub magnitudes: Vec<f64>,
    pub ratios: Vec<f64>,
    pub hw_infinite_suspected: bool,
}

/// `min_θ Re Φ(|ξ|θ)/log(1+|ξ|)` at each magnitude.
pub fn hw_index(model: &LevyModel, magnitudes: &[f64]) -> Result<HwReport> {
    if magnitudes.is_empty() {
        return Ok(HwReport { magnitudes: vec![], ratios: vec![], hw_infinite_suspected: false });
    }
    if let Some(m) = magnitudes.iter().find(|&&m| !(m >= 1.0 && m.is_finite())) {
        return Err(LevyError::InvalidArgument(format!("magnitude {m} must be finite and ≥ 1")));
    }
    let lo = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = magnitudes.iter().copied().fold(0.0, f64::max);
    let sym = CompiledSymbol::new(model, Window::Full, lo, hi.max(lo * 1.001))?;
    let directions: Vec<[f64; 2]> = if model.dim() == 1 || model.is_isotropic() {
        vec![[1.0, 0.0]]
    } else {
        (0..32).map(|j| {
            let a = PI * j as f64 / 32.0;
            [a.cos(), a.sin()]
        }).collect()
    };
    let ratio_at = |m: f64| {
        let worst = directions
            .iter()
            .map(|d| {
                let xi = [m * d[0], m * d[1]];
                sym.re(&xi[..model.dim()])
            })
            .fold(f64::INFINITY, f64::min);
        worst / m.ln_1p()
    };
    let ratios: Vec<f64> = magnitudes.iter().map(|&m| ratio_at(m)).collect();
    // The trend over the top decade is judged on a dense grid of its own, so
    // oscillating bounded symbols do not pass by coincidence.
    let top: Vec<f64> = (0..=16).map(|k| ratio_at(hi * 10f64.powf(k as f64 / 16.0 - 1.0).max(lo / hi))).collect();
    let increasing = hi > lo && top.windows(2).all(|w| w[1] >= w[0]) && top[16] > top[0] * (1.0 + 1e-9);
    Ok(HwReport {
        magnitudes: magnitudes.to_vec(),
        ratios,
        hw_infinite_suspected: increasing,
    })
}
