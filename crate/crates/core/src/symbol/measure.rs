//! Moments of the Lévy measure and pointwise comparison of two measures.

use serde::Serialize;

use super::model::LevyModel;
use super::radial::Radial;
use super::spectral::SpectralMeasure;
use crate::error::{LevyError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "region", content = "r", rename_all = "lowercase")]
pub enum Region {
    /// `|y| ≤ r`
    Inner(f64),
    /// `|y| > r`
    Outer(f64),
    All,
}

/// `∫_region |y|^n ν(dy)`.
pub fn levy_moment(model: &LevyModel, n: f64, region: Region) -> Result<f64> {
    let (spectral, radial) = model.require_polar()?;
    let (a, b) = match region {
        Region::Inner(r) => (0.0, r),
        Region::Outer(r) => (r, f64::INFINITY),
        Region::All => (0.0, f64::INFINITY),
    };
    if !(n >= 0.0) || !(b > 0.0) {
        return Err(LevyError::InvalidArgument(format!("moment order {n} / region {region:?} invalid")));
    }
    Ok(spectral.total_mass() * radial.moment(n, a, b)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeReport {
    pub valid: bool,
    /// Smallest sampled `(ν − ν^Y)/max(ν, ν^Y)` over directions and radii.
    pub min_gap: f64,
    pub arg_min: Option<(usize, f64)>,
}

/// Checks `ν − ν^Y ≥ 0` by sampling the radial densities direction by
/// direction on a log grid (plus both sides of every breakpoint).
pub fn decompose_check(model: &LevyModel, minorant: &LevyModel) -> Result<DecomposeReport> {
    let (s_model, r_model) = model.require_polar()?;
    let (s_minor, r_minor) = minorant.require_polar()?;
    if model.dim() != minorant.dim() {
        return Err(LevyError::IncomparableMeasures(format!(
            "dimensions differ ({} vs {})",
            model.dim(),
            minorant.dim()
        )));
    }
    let grid = sample_radii(&r_model, &r_minor);
    // Pairs of (model weight, minorant weight) per direction.
    let pairs: Vec<(f64, f64)> = match (s_model, s_minor) {
        (SpectralMeasure::Uniform { mass: a, .. }, SpectralMeasure::Uniform { mass: b, .. }) => vec![(*a, *b)],
        (SpectralMeasure::Atoms { atoms: am, .. }, SpectralMeasure::Atoms { atoms: an, .. }) => {
            let mut dirs: Vec<[f64; 2]> = Vec::new();
            for a in am.iter().chain(an.iter()) {
                if !dirs.iter().any(|d| same_dir(d, &a.direction)) {
                    dirs.push(a.direction);
                }
            }
            dirs.iter()
                .map(|d| {
                    let w = |atoms: &[super::spectral::Atom]| {
                        atoms.iter().filter(|a| same_dir(&a.direction, d)).map(|a| a.weight).sum::<f64>()
                    };
                    (w(am), w(an))
                })
                .collect()
        }
        _ => {
            return Err(LevyError::IncomparableMeasures(
                "one spectral measure is uniform and the other atomic; their densities are mutually singular".into(),
            ))
        }
    };
    let mut min_gap = f64::INFINITY;
    let mut arg_min = None;
    for (k, (wm, wn)) in pairs.iter().enumerate() {
        for &s in &grid {
            let a = wm * r_model.value(s);
            let b = wn * r_minor.value(s);
            let scale = a.max(b);
            if scale == 0.0 {
                continue;
            }
            let gap = (a - b) / scale;
            if gap < min_gap {
                min_gap = gap;
                arg_min = Some((k, s));
            }
        }
    }
    if !min_gap.is_finite() {
        min_gap = 0.0;
    }
    // Exact ties count as zero gap.
    if min_gap.abs() < 1e-14 {
        min_gap = 0.0;
    }
    Ok(DecomposeReport { valid: min_gap >= 0.0, min_gap, arg_min })
}

fn same_dir(a: &[f64; 2], b: &[f64; 2]) -> bool {
    (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9
}

fn sample_radii(a: &Radial, b: &Radial) -> Vec<f64> {
    let mut s: Vec<f64> = (0..=480).map(|i| 10f64.powf(-6.0 + i as f64 / 40.0)).collect();
    for p in a.pieces.iter().chain(b.pieces.iter()) {
        for x in [p.start, p.end] {
            if x > 0.0 && x.is_finite() {
                s.extend([x * (1.0 - 1e-9), x, x * (1.0 + 1e-9)]);
            }
        }
    }
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}
