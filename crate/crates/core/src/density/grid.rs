use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{LevyError, Result};
use crate::symbol::PhiProfile;

/// Rescaled half-width: the window spans `±40/φ⁻¹(1/t)`.
pub const HALF_WIDTH_UNITS: f64 = 40.0;
/// Target decay `t·φ(Ξ)` at the frequency cutoff (`e^{−27} < 1e−11`).
pub const CUTOFF_DECAY: f64 = 27.0;

/// Regular lattice `y_j = −L + jΔy`, `Δy = 2L/N`, per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    pub l: f64,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, l: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LevyError::InvalidArgument(format!("grid dimension {dim} is not 1 or 2")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(LevyError::InvalidArgument(format!("N = {n} must be a power of two ≥ 8")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(LevyError::InvalidArgument(format!("L = {l} must be positive")));
        }
        Ok(GridSpec { dim, n, l })
    }

    pub fn default_n(dim: usize) -> usize {
        if dim == 1 {
            1 << 18
        } else {
            1 << 10
        }
    }

    fn max_n(dim: usize) -> usize {
        if dim == 1 {
            1 << 22
        } else {
            1 << 12
        }
    }

    /// `L = 40/φ⁻¹(1/t)`, and N (default size, doubled as needed) such that
    /// `t·φ(Ξ) > 27`.
    pub fn auto(dim: usize, t: f64, profile: &PhiProfile) -> Result<Self> {
        Self::resolve(dim, t, profile, None, None)
    }

    /// As [`GridSpec::auto`], with either parameter pinned by the caller.
    pub fn resolve(dim: usize, t: f64, profile: &PhiProfile, n: Option<usize>, l: Option<f64>) -> Result<Self> {
        let l = match l {
            Some(l) => l,
            None => HALF_WIDTH_UNITS * profile.h_of_t(t)?,
        };
        let n = match n {
            Some(n) => n,
            None => {
                let mut n = Self::default_n(dim);
                while n < Self::max_n(dim) && t * profile.phi(PI * n as f64 / (2.0 * l)) < CUTOFF_DECAY {
                    n *= 2;
                }
                n
            }
        };
        GridSpec::new(dim, n, l)
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.l
    }

    /// Frequency cutoff Ξ = πN/(2L).
    pub fn xi_max(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.l)
    }

    pub fn y(&self, j: usize) -> f64 {
        -self.l + j as f64 * self.dy()
    }

    /// Signed frequency index of FFT slot `i`.
    pub fn freq_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell volume Δy^d.
    pub fn cell(&self) -> f64 {
        self.dy().powi(self.dim as i32)
    }
}
