//! Tabulated symbols for fast repeated evaluation on frequency lattices.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::bernstein::BernsteinSpec;
use super::explicit::ExplicitSymbol;
use super::model::{radial_window, LevyModel, ModelKind, Window};
use super::spectral::{Atom, SpectralMeasure};
use crate::error::{LevyError, Result};
use crate::quad::Quad;

const NODES_PER_DECADE: f64 = 64.0;

/// Natural cubic spline on a uniform grid in `x = ln u`, extrapolated
/// linearly with the end slopes.
#[derive(Debug, Clone)]
pub(crate) struct Spline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    pub(crate) fn new(x0: f64, h: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        let mut m = vec![0.0; n];
        if n >= 3 {
            // Thomas algorithm for M_{i-1} + 4 M_i + M_{i+1} = 6 Δ²y_i / h².
            let k = n - 2;
            let mut c = vec![0.0; k];
            let mut d = vec![0.0; k];
            for i in 0..k {
                let rhs = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]) / (h * h);
                let denom = if i == 0 { 4.0 } else { 4.0 - c[i - 1] };
                c[i] = 1.0 / denom;
                d[i] = if i == 0 { rhs / denom } else { (rhs - d[i - 1]) / denom };
            }
            for i in (0..k).rev() {
                m[i + 1] = if i == k - 1 { d[i] } else { d[i] - c[i] * m[i + 2] };
            }
        }
        Spline { x0, h, y, m }
    }

    fn slope(&self, i: usize) -> f64 {
        // Derivative of segment i at its left (or right, past the end) node.
        let n = self.y.len();
        if i + 1 >= n {
            let j = n - 2;
            (self.y[j + 1] - self.y[j]) / self.h + self.h * (2.0 * self.m[j + 1] + self.m[j]) / 6.0
        } else {
            (self.y[i + 1] - self.y[i]) / self.h - self.h * (2.0 * self.m[i] + self.m[i + 1]) / 6.0
        }
    }

    pub(crate) fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        let t = (x - self.x0) / self.h;
        if t <= 0.0 {
            return self.y[0] + self.slope(0) * (x - self.x0);
        }
        if t >= (n - 1) as f64 {
            let xe = self.x0 + (n - 1) as f64 * self.h;
            return self.y[n - 1] + self.slope(n - 1) * (x - xe);
        }
        let i = (t.floor() as usize).min(n - 2);
        let a = t - i as f64;
        let b = 1.0 - a;
        let h2 = self.h * self.h / 6.0;
        b * self.y[i]
            + a * self.y[i + 1]
            + ((b * b * b - b) * self.m[i] + (a * a * a - a) * self.m[i + 1]) * h2
    }
}

/// Radial pair `(R(u), S(u))` on a log grid; `R` via `ln R`, `S` via
/// `S/(R+u)`.
#[derive(Debug, Clone)]
struct RadialTable {
    ln_re: Spline,
    im: Option<Spline>,
}

impl RadialTable {
    fn build(model: &LevyModel, window: Window, u_min: f64, u_max: f64, want_im: bool) -> Result<Self> {
        let (_, radial) = model.require_polar()?;
        let x0 = u_min.ln();
        let span = (u_max / u_min).ln();
        let h = std::f64::consts::LN_10 / NODES_PER_DECADE;
        let n = (span / h).ceil() as usize + 1;
        let values: Vec<Result<(f64, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| radial_window(&radial, (x0 + i as f64 * h).exp(), window, want_im))
            .collect();
        let mut ln_re = Vec::with_capacity(n);
        let mut im = Vec::with_capacity(n);
        for (i, v) in values.into_iter().enumerate() {
            let (r, s) = v?;
            let u = (x0 + i as f64 * h).exp();
            ln_re.push(r.max(1e-300).ln());
            im.push(s / (r + u));
        }
        Ok(RadialTable {
            ln_re: Spline::new(x0, h, ln_re),
            im: want_im.then(|| Spline::new(x0, h, im)),
        })
    }

    fn re(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            self.ln_re.eval(u.ln()).exp()
        }
    }

    fn pair(&self, u: f64) -> (f64, f64) {
        if u <= 0.0 {
            return (0.0, 0.0);
        }
        let x = u.ln();
        let r = self.ln_re.eval(x).exp();
        let s = self.im.as_ref().map_or(0.0, |sp| sp.eval(x) * (r + u));
        (r, s)
    }
}

#[derive(Debug, Clone)]
enum Inner {
    Explicit(ExplicitSymbol),
    Bernstein(BernsteinSpec),
    Atoms { atoms: Vec<Atom>, table: RadialTable },
    Isotropic { table: Spline },
}

/// A symbol (full or truncated) prepared for lattice evaluation. Includes the
/// centering drift when the model asks for it.
#[derive(Debug, Clone)]
pub struct CompiledSymbol {
    dim: usize,
    window: Window,
    drift: [f64; 2],
    inner: Inner,
    label: String,
}

impl CompiledSymbol {
    /// Prepares the symbol for `|ξ| ∈ [u_min, u_max]`; outside that range the
    /// tables are extended by log–log extrapolation.
    pub fn new(model: &LevyModel, window: Window, u_min: f64, u_max: f64) -> Result<Self> {
        if !(u_min > 0.0 && u_max > u_min) {
            return Err(LevyError::InvalidArgument(format!("bad frequency range [{u_min}, {u_max}]")));
        }
        if matches!(window, Window::Residual(_)) {
            return Err(LevyError::InvalidArgument("residual symbols are not compiled".into()));
        }
        // Margins keep the spline ends away from the requested range.
        let lo = u_min / 4.0;
        let hi = u_max * 4.0;
        let inner = match model.kind() {
            ModelKind::Explicit(e) if window == Window::Full => Inner::Explicit(*e),
            ModelKind::SubordinateBm(b) if window == Window::Full => Inner::Bernstein(*b),
            ModelKind::Polar { spectral, .. } => match spectral.discrete() {
                Some(atoms) => Inner::Atoms {
                    atoms,
                    table: RadialTable::build(model, window, lo, hi, !spectral.is_symmetric())?,
                },
                None => Inner::Isotropic {
                    table: isotropic_table(model, spectral, window, lo, hi)?,
                },
            },
            _ => return Err(LevyError::NoLevyMeasure(model.label())),
        };
        let drift = if window == Window::Full { model.drift() } else { [0.0; 2] };
        let label = match window {
            Window::Full => model.label(),
            Window::Truncated(r) => format!("{} truncated r={r}", model.label()),
            Window::Residual(r) => format!("{} residual r={r}", model.label()),
        };
        Ok(CompiledSymbol { dim: model.dim(), window, drift, inner, label })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Centered symbol value.
    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        let mut v = match &self.inner {
            Inner::Explicit(e) => Complex64::new(e.eval(xi), 0.0),
            Inner::Bernstein(b) => Complex64::new(b.f(xi.iter().map(|x| x * x).sum()), 0.0),
            Inner::Atoms { atoms, table } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in atoms {
                    let u: f64 = xi.iter().zip(a.direction.iter()).map(|(x, t)| x * t).sum();
                    let (r, s) = table.pair(u.abs());
                    acc += Complex64::new(r, u.signum() * s) * a.weight;
                }
                acc
            }
            Inner::Isotropic { table } => {
                let rho = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
                if rho == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(table.eval(rho.ln()).exp(), 0.0)
                }
            }
        };
        let shift: f64 = xi.iter().zip(self.drift.iter()).map(|(x, b)| x * b).sum();
        v.im += shift;
        v
    }

    pub fn re(&self, xi: &[f64]) -> f64 {
        match &self.inner {
            Inner::Atoms { atoms, table } => atoms
                .iter()
                .map(|a| {
                    let u: f64 = xi.iter().zip(a.direction.iter()).map(|(x, t)| x * t).sum();
                    a.weight * table.re(u.abs())
                })
                .sum(),
            _ => self.eval(xi).re,
        }
    }
}

fn isotropic_table(
    model: &LevyModel,
    spectral: &SpectralMeasure,
    window: Window,
    lo: f64,
    hi: f64,
) -> Result<Spline> {
    // The projection ρ cos θ reaches far below ρ; extend the radial table.
    let radial = RadialTable::build(model, window, lo * 1e-4, hi, false)?;
    let mass = spectral.total_mass();
    let x0 = lo.ln();
    let h = std::f64::consts::LN_10 / NODES_PER_DECADE;
    let n = ((hi / lo).ln() / h).ceil() as usize + 1;
    let quad = Quad::new(1e-11);
    let vals: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rho = (x0 + i as f64 * h).exp();
            let est = quad.integrate(|th: f64| radial.re(rho * th.cos()), 0.0, FRAC_PI_2)?;
            Ok((2.0 * mass / PI * est.value).max(1e-300).ln())
        })
        .collect();
    let y = vals.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Spline::new(x0, h, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_cubic_interior() {
        let h = 0.1;
        let y: Vec<f64> = (0..50).map(|i| ((i as f64) * h).sin()).collect();
        let s = Spline::new(0.0, h, y);
        for x in [0.55, 1.234, 3.3] {
            assert!((s.eval(x) - f64::sin(x)).abs() < 1e-5);
        }
    }

    #[test]
    fn spline_linear_data_exact_with_extrapolation() {
        let y: Vec<f64> = (0..10).map(|i| 2.0 * i as f64 + 1.0).collect();
        let s = Spline::new(0.0, 1.0, y);
        for x in [-3.0, 0.5, 4.2, 15.0] {
            assert!((s.eval(x) - (2.0 * x + 1.0)).abs() < 1e-12);
        }
    }
}
