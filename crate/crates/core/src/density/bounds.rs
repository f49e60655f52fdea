//! Integrability conditions, the computable part of the ψ constant, decay
//! envelopes, and h(t)-rescaled densities.

use std::f64::consts::PI;

use serde::Serialize;

use super::grid::GridSpec;
use super::lattice::{density, min_re, DensityGrid};
use crate::error::{LevyError, Result};
use crate::quad::Quad;
use crate::symbol::{levy_moment, CompiledSymbol, LevyModel, ModelKind, PhiProfile, Region, SymbolSource};

/// Decades of |ξ| integrated on either side of the natural scale.
const RADIAL_DECADES: f64 = 8.0;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntegralReport {
    pub value: f64,
    pub bound_ratio: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Envelope {
    pub sup_value: f64,
    pub arg_sup: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub m: u32,
    pub psi_factor: f64,
    pub envelope_sup: f64,
    /// `(t, envelope / reference)` per sweep point.
    pub ratio_series: Vec<(f64, f64)>,
    pub bounded: bool,
    pub observed_max: f64,
}

impl BoundReport {
    /// Sweep summary: `bounded` when every ratio stays below `slack`.
    pub fn from_sweep(n: u32, m: u32, psi_factor: f64, envelopes: &[(f64, f64)], reference: f64, slack: f64) -> Self {
        let ratio_series: Vec<(f64, f64)> = envelopes.iter().map(|&(t, e)| (t, e / reference)).collect();
        let observed_max = ratio_series.iter().fold(0.0_f64, |m, r| m.max(r.1));
        let envelope_sup = envelopes.iter().fold(0.0_f64, |m, e| m.max(e.1));
        BoundReport {
            n,
            m,
            psi_factor,
            envelope_sup,
            ratio_series,
            bounded: observed_max.is_finite() && observed_max <= slack,
            observed_max,
        }
    }
}

/// `∫_{R^d} e^{−t Re Φ(ξ)} w(|ξ|) dξ` where `w(ρ) ≤ C ρ^k` for large ρ,
/// integrated radially in `ln ρ` around the scale `rho_star`.
fn radial_integral<W>(sym: &CompiledSymbol, model: &LevyModel, t: f64, rho_star: f64, k: f64, w: W) -> Result<f64>
where
    W: Fn(f64) -> f64 + Sync,
{
    let dim = sym.dim();
    let d = dim as f64;
    let span = RADIAL_DECADES * std::f64::consts::LN_10;
    let (u_lo, u_hi) = (rho_star.ln() - span, rho_star.ln() + span);
    let top = u_hi.exp();
    let bottom = u_lo.exp();

    let growth = t * min_re(sym, dim, top) / top.ln_1p();
    if !(growth > k + d) {
        return Err(LevyError::Nonintegrable(format!(
            "t·ReΦ(ρ)/log(1+ρ) = {growth:.3} at ρ = {top:.3e} does not exceed {}",
            k + d
        )));
    }

    let quad = Quad::new(1e-9);
    let along = |dir: [f64; 2]| -> Result<f64> {
        let f = |u: f64| {
            let rho = u.exp();
            let xi = [rho * dir[0], rho * dir[1]];
            (-t * sym.re(&xi[..dim])).exp() * w(rho) * rho.powf(d)
        };
        let mid = rho_star.ln();
        Ok(quad.integrate_points(f, &[u_lo, mid - 2.0, mid, mid + 2.0, u_hi])?.value)
    };

    let core = if dim == 1 {
        along([1.0, 0.0])? + along([-1.0, 0.0])?
    } else if model.is_isotropic() {
        2.0 * PI * along([1.0, 0.0])?
    } else {
        // Anisotropic: angular quadrature outside the radial one.
        let outer = Quad::new(1e-7);
        let mut err = None;
        let v = outer
            .integrate_points(
                |th: f64| match along([th.cos(), th.sin()]) {
                    Ok(v) => v,
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                },
                &[0.0, 0.5 * PI, PI, 1.5 * PI, 2.0 * PI],
            )?
            .value;
        if let Some(e) = err {
            return Err(e);
        }
        v
    };
    let sphere = if dim == 1 { 2.0 } else { 2.0 * PI };
    // Below the range e^{−tReΦ} ≈ 1; above it the decay is at least ρ^{−growth}.
    let low = sphere * w(bottom) * bottom.powf(d) / d;
    let high = sphere * w(top) * (-t * min_re(sym, dim, top)).exp() * top.powf(d) / (growth - k - d);
    Ok(core + low + high)
}

/// `∫ e^{−tReΦ}|ξ|^m dξ` and its ratio to `φ⁻¹(1/t)^{m+d}`.
pub fn integral_condition(model: &LevyModel, t: f64, m: u32, profile: &PhiProfile) -> Result<IntegralReport> {
    if !(t > 0.0) {
        return Err(LevyError::InvalidArgument(format!("t = {t} must be positive")));
    }
    let rho_star = profile.inverse(1.0 / t)?;
    let scale = 10f64.powf(RADIAL_DECADES);
    let sym = CompiledSymbol::new(model, crate::symbol::Window::Full, rho_star / scale, rho_star * scale)?;
    let value = radial_integral(&sym, model, t, rho_star, m as f64, |rho| rho.powi(m as i32))?;
    let bound_ratio = value / rho_star.powi((m as usize + model.dim()) as i32);
    Ok(IntegralReport { value, bound_ratio })
}

/// Radius where `min_θ Re Φ = 1/t`, by bisection in `ln ρ`.
fn natural_scale(source: &SymbolSource<'_>, t: f64) -> Result<f64> {
    let dim = source.model.dim();
    let sym = source.compile(1e-12, 1e12)?;
    let target = 1.0 / t;
    let (mut lo, mut hi) = (-27.0_f64, 27.0_f64);
    if min_re(&sym, dim, hi.exp()) < target {
        return Err(LevyError::Nonintegrable(format!(
            "Re Φ stays below 1/t = {target:e} up to |ξ| = 1e12"
        )));
    }
    if min_re(&sym, dim, lo.exp()) >= target {
        return Ok(lo.exp());
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if min_re(&sym, dim, mid.exp()) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// `(1 + t∫(|y|²+|y|^{2∨n})ν)^n · ∫ e^{−tReΦ}(1+|ξ|)^{n+m} dξ` for the
/// source (truncated sources use the truncated measure and symbol).
pub fn psi_factor_at(source: &SymbolSource<'_>, t: f64, n: u32, m: u32) -> Result<f64> {
    if !(t > 0.0) {
        return Err(LevyError::InvalidArgument(format!("t = {t} must be positive")));
    }
    let moments = if n == 0 {
        1.0
    } else {
        let region = source.truncation.map_or(Region::All, Region::Inner);
        let hi = (n.max(2)) as f64;
        1.0 + t * (levy_moment(source.model, 2.0, region)? + levy_moment(source.model, hi, region)?)
    };
    let rho_star = natural_scale(source, t)?;
    let scale = 10f64.powf(RADIAL_DECADES);
    let sym = source.compile(rho_star / scale, rho_star * scale)?;
    let k = (n + m) as i32;
    let integral = radial_integral(&sym, source.model, t, rho_star, k as f64, |rho| (1.0 + rho).powi(k))?;
    Ok(moments.powi(n as i32) * integral)
}

/// ψ(n, m, ν) without the combinatorial constant, at t = 1.
pub fn psi_factor(source: &SymbolSource<'_>, n: u32, m: u32) -> Result<f64> {
    psi_factor_at(source, 1.0, n, m)
}

/// `sup_y |v(y)|(1+|y|)^n` over the lattice (grid coordinates).
pub fn envelope_check(dg: &DensityGrid, n: u32) -> Result<Envelope> {
    let mut best = Envelope { sup_value: 0.0, arg_sup: [0.0; 2] };
    for (i, v) in dg.values.iter().enumerate() {
        let p = dg.point(i);
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        let e = v.abs() * (1.0 + r).powi(n as i32);
        if !e.is_finite() {
            return Err(LevyError::InvalidArgument(format!("non-finite lattice value at {p:?}")));
        }
        if e > best.sup_value {
            best = Envelope { sup_value: e, arg_sup: p };
        }
    }
    Ok(best)
}

/// `g_t(y) = h^d p_t^h(h y)` with `h = h(t)` from the profile. `grid` is in
/// rescaled units. Models given by an explicit symbol have no truncation and
/// use the full symbol.
pub fn rescaled_density(model: &LevyModel, t: f64, profile: &PhiProfile, grid: &GridSpec) -> Result<DensityGrid> {
    let h = profile.h_of_t(t)?;
    rescaled_with_h(model, t, h, grid)
}

pub(crate) fn rescaled_with_h(model: &LevyModel, t: f64, h: f64, grid: &GridSpec) -> Result<DensityGrid> {
    let source = match model.kind() {
        ModelKind::Explicit(_) => SymbolSource::full(model),
        _ => SymbolSource::truncated(model, h),
    };
    let physical = GridSpec::new(grid.dim, grid.n, grid.l * h)?;
    let mut dg = density(&source, t, &physical, [0, 0])?;
    let scale = h.powi(grid.dim as i32);
    dg.values.iter_mut().for_each(|v| *v *= scale);
    dg.grid = *grid;
    dg.meta.rescale = h;
    dg.aux.images = None;
    Ok(dg)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivativeBoundReport {
    pub checked: usize,
    pub violations: usize,
    /// Largest ratio of a finite-difference derivative to its bound.
    pub worst_ratio: f64,
    pub second_moment: f64,
}

/// Finite-difference check of `|∇Φ(ξ)| ≤ (1+|ξ|)∫|y|²ν` and
/// `|∂ᵢ²Φ(ξ)| ≤ ∫|y|²ν` at `points` random frequencies with
/// `|ξ| ∈ [10^{-1.5}, 20]`.
pub fn symbol_derivative_check(model: &LevyModel, points: usize, seed: u64) -> Result<DerivativeBoundReport> {
    use rand::{Rng, SeedableRng};
    let m2 = levy_moment(model, 2.0, Region::All)?;
    let dim = model.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let phi = |xi: &[f64]| crate::symbol::eval_symbol(model, xi);
    let step = 1e-2;
    let mut report = DerivativeBoundReport { checked: 0, violations: 0, worst_ratio: 0.0, second_moment: m2 };
    for _ in 0..points {
        let mag = 10f64.powf(rng.random_range(-1.5..1.3));
        let angle = if dim == 1 {
            if rng.random::<bool>() { 0.0 } else { PI }
        } else {
            rng.random_range(0.0..2.0 * PI)
        };
        let xi = [mag * angle.cos(), mag * angle.sin()];
        let centre = phi(&xi[..dim])?;
        let mut grad2 = 0.0;
        let mut worst_second: f64 = 0.0;
        for axis in 0..dim {
            let mut lo = xi;
            let mut hi = xi;
            lo[axis] -= step;
            hi[axis] += step;
            let (a, c) = (phi(&lo[..dim])?, phi(&hi[..dim])?);
            grad2 += ((c - a) / (2.0 * step)).norm_sqr();
            worst_second = worst_second.max(((c - 2.0 * centre + a) / (step * step)).norm());
        }
        let ratio = (grad2.sqrt() / ((1.0 + mag) * m2)).max(worst_second / m2);
        report.worst_ratio = report.worst_ratio.max(ratio);
        report.checked += 1;
        // Finite differences carry O(step²) relative error.
        if ratio > 1.0 + 1e-6 {
            report.violations += 1;
        }
    }
    Ok(report)
}
