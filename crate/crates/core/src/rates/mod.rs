//! Decay-rate measurement: TV distances and gradient norms over time sweeps,
//! fitted against theoretical laws.

mod distance;
mod fit;
mod law;

pub use distance::{
    factorization_gap, grad_norm, grad_sweep, profile_for, tv_distance, tv_sweep, FactorizationGap, GridOverride,
    SHIFT_LIMIT_FRACTION,
};
pub use fit::{
    baseline_compare, rate_fit, write_series_csv, BaselinePoint, FitSummary, Quantity, RateFit, RateSeries,
    RatioStats, BASELINE_FLAG_FACTOR, MIN_FIT_DECADES, MIN_FIT_POINTS,
};
pub use law::{default_law, hypothesis_report, HypothesisReport, RateLaw, Regime};

/// `points` log-spaced times on `[lo, hi]`.
pub fn log_times(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    (0..points).map(|k| lo * (hi / lo).powf(k as f64 / (points - 1) as f64)).collect()
}
