//! Log–log fits of measured series against rate laws.

use std::io::Write;

use serde::Serialize;

use super::law::{HypothesisReport, RateLaw, Regime};
use crate::error::{LevyError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Tv,
    Grad,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Tv => "tv",
            Quantity::Grad => "grad",
        }
    }
}

/// Measured values with strictly increasing, positive t.
#[derive(Debug, Clone, Serialize)]
pub struct RateSeries {
    pub quantity: Quantity,
    pub points: Vec<(f64, f64)>,
}

impl RateSeries {
    pub fn new(quantity: Quantity, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(LevyError::InvalidArgument("series times must be strictly increasing".into()));
        }
        if let Some(p) = points.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0 && p.1.is_finite())) {
            return Err(LevyError::InvalidArgument(format!("series point {p:?} is not positive")));
        }
        Ok(RateSeries { quantity, points })
    }

    /// First point where the value rises above an earlier one by more than
    /// `rel_slack` (relative).
    pub fn monotonicity_violation(&self, rel_slack: f64) -> Option<(f64, f64)> {
        let mut lowest = f64::INFINITY;
        for &(t, v) in &self.points {
            if v > lowest * (1.0 + rel_slack) {
                return Some((t, v));
            }
            lowest = lowest.min(v);
        }
        None
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioStats {
    pub min: f64,
    pub max: f64,
    /// `max/min − 1`.
    pub drift: f64,
    /// Largest `max/min − 1` within any one-decade window of t.
    pub drift_per_decade: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r_squared: f64,
    /// None when the law is not a pure power.
    pub theory_exponent: Option<f64>,
    pub ratio_stats: RatioStats,
    pub t_window: (f64, f64),
}

pub const MIN_FIT_POINTS: usize = 8;
pub const MIN_FIT_DECADES: f64 = 2.0;

/// Least-squares slope of log value against log t, and the spread of
/// value/law(t).
pub fn rate_fit(series: &RateSeries, law: &RateLaw) -> Result<RateFit> {
    let pts = &series.points;
    if pts.len() < MIN_FIT_POINTS {
        return Err(LevyError::InsufficientSpan(format!("{} points, need {MIN_FIT_POINTS}", pts.len())));
    }
    let (t0, t1) = (pts[0].0, pts[pts.len() - 1].0);
    let decades = (t1 / t0).log10();
    if decades < MIN_FIT_DECADES - 1e-9 {
        return Err(LevyError::InsufficientSpan(format!("{decades:.2} decades, need {MIN_FIT_DECADES}")));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };

    let ratios: Vec<f64> = pts.iter().map(|&(t, v)| v / law.eval(t)).collect();
    if ratios.iter().any(|r| !r.is_finite()) {
        return Err(LevyError::InvalidArgument(format!("law {law:?} not evaluable on the series")));
    }
    let spread = |r: &[f64]| {
        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = r.iter().cloned().fold(0.0, f64::max);
        (lo, hi, hi / lo - 1.0)
    };
    let (min, max, drift) = spread(&ratios);
    let mut drift_per_decade: f64 = 0.0;
    for i in 0..pts.len() {
        let end = pts.partition_point(|p| p.0 <= pts[i].0 * 10.0 * (1.0 + 1e-12));
        drift_per_decade = drift_per_decade.max(spread(&ratios[i..end]).2);
    }
    Ok(RateFit {
        slope,
        intercept,
        stderr,
        r_squared,
        theory_exponent: law.theory_exponent(),
        ratio_stats: RatioStats { min, max, drift, drift_per_decade },
        t_window: (t0, t1),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BaselinePoint {
    pub t: f64,
    pub value: f64,
    pub baseline: f64,
    /// Measured value is more than 10× below the baseline.
    pub beats_baseline: bool,
}

pub const BASELINE_FLAG_FACTOR: f64 = 10.0;

/// Pairs a TV series with `C(1+|x−y|)/√t ∧ 2`, C calibrated so the two
/// agree at the first point.
pub fn baseline_compare(series: &RateSeries, x_minus_y: f64) -> Vec<BaselinePoint> {
    let Some(&(t0, v0)) = series.points.first() else {
        return Vec::new();
    };
    let width = 1.0 + x_minus_y.abs();
    let c = v0 * t0.sqrt() / width;
    series
        .points
        .iter()
        .map(|&(t, value)| {
            let baseline = (c * width / t.sqrt()).min(2.0);
            BaselinePoint { t, value, baseline, beats_baseline: value * BASELINE_FLAG_FACTOR < baseline }
        })
        .collect()
}

/// Rows `t,quantity,value,law_value,ratio`.
pub fn write_series_csv<W: Write>(series: &RateSeries, law: &RateLaw, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,quantity,value,law_value,ratio")?;
    for &(t, v) in &series.points {
        let l = law.eval(t);
        writeln!(w, "{t},{},{v},{l},{}", series.quantity.name(), v / l)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub slope: f64,
    pub stderr: f64,
    pub r2: f64,
    pub drift: f64,
    pub drift_per_decade: f64,
    pub theory_exponent: Option<f64>,
    pub regime: Regime,
    pub t_window: (f64, f64),
    pub law: RateLaw,
    pub hypothesis_report: HypothesisReport,
}

impl FitSummary {
    pub fn new(fit: &RateFit, law: RateLaw, regime: Regime, hypothesis_report: HypothesisReport) -> Self {
        FitSummary {
            slope: fit.slope,
            stderr: fit.stderr,
            r2: fit.r_squared,
            drift: fit.ratio_stats.drift,
            drift_per_decade: fit.ratio_stats.drift_per_decade,
            theory_exponent: fit.theory_exponent,
            regime,
            t_window: fit.t_window,
            law,
            hypothesis_report,
        }
    }
}
