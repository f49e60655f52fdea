//! Theoretical decay laws and their hypothesis checks.

use serde::Serialize;

use crate::error::{LevyError, Result};
use crate::symbol::{BernsteinSpec, ExplicitSymbol, LevyModel, ModelKind};

/// Asymptotic regime of a rate statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// t → 0
    Small,
    /// t → ∞
    Large,
}

impl Regime {
    /// Default fitting window in t.
    pub fn window(self) -> (f64, f64) {
        match self {
            Regime::Small => (1e-4, 1e-1),
            Regime::Large => (10.0, 1e4),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "small" => Some(Regime::Small),
            "large" => Some(Regime::Large),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum RateLaw {
    /// `t^p`
    PowerLaw { exponent: f64 },
    /// `φ⁻¹(1/t)` for the symbol `f(|ξ|²)`, i.e. `√(f⁻¹(1/t))`.
    InverseBernstein { spec: BernsteinSpec, regime: Regime },
    /// `[t⁻¹ (log(1+t⁻¹))^{−β/2}]^{1/α}`
    LogCorrectedPower { alpha: f64, beta: f64 },
}

impl RateLaw {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            RateLaw::PowerLaw { exponent } => t.powf(exponent),
            RateLaw::InverseBernstein { spec, .. } => spec.radial_inverse(1.0 / t),
            RateLaw::LogCorrectedPower { alpha, beta } => {
                ((1.0 / t) * (1.0 / t).ln_1p().powf(-beta / 2.0)).powf(1.0 / alpha)
            }
        }
    }

    /// Exponent of t when the law is (asymptotically) a pure power.
    pub fn theory_exponent(&self) -> Option<f64> {
        match *self {
            RateLaw::PowerLaw { exponent } => Some(exponent),
            RateLaw::InverseBernstein { spec, regime: Regime::Large } => Some(-1.0 / (spec.alpha + spec.beta)),
            _ => None,
        }
    }

    /// Checks the law is finite, positive and decreasing on `[t0, t1]`.
    pub fn check_on(&self, t0: f64, t1: f64) -> Result<()> {
        let ts: Vec<f64> = (0..=40).map(|k| t0 * (t1 / t0).powf(k as f64 / 40.0)).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        if vals.iter().any(|v| !(v.is_finite() && *v > 0.0)) || vals.windows(2).any(|w| w[1] > w[0]) {
            return Err(LevyError::InvalidArgument(format!(
                "rate law {self:?} is not positive and decreasing on [{t0}, {t1}]"
            )));
        }
        Ok(())
    }
}

/// The decay law `φ⁻¹(1/t)` predicts for a model in a regime: power laws
/// from the small-jump index (t → 0) or the tail index capped at 2 (t → ∞),
/// and the Bernstein inverse for subordinate Brownian motions.
pub fn default_law(model: &LevyModel, regime: Regime) -> Result<RateLaw> {
    let power = |alpha: f64| RateLaw::PowerLaw { exponent: -1.0 / alpha };
    match model.kind() {
        ModelKind::SubordinateBm(spec) => Ok(RateLaw::InverseBernstein { spec: *spec, regime }),
        ModelKind::Explicit(ExplicitSymbol::Power { alpha, .. }) => Ok(power(*alpha)),
        ModelKind::Explicit(e) => Err(LevyError::InvalidArgument(format!("{} has no decay law", e.label()))),
        ModelKind::Polar { family, .. } => {
            let alpha = family.index();
            if regime == Regime::Small {
                return Ok(power(alpha));
            }
            let tail = match family.name() {
                "stable" => alpha,
                "layered" => family.params().iter().find(|p| p.0 == "beta").map_or(2.0, |p| p.1.min(2.0)),
                _ => 2.0,
            };
            Ok(power(tail))
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HypothesisReport {
    pub regime: Regime,
    /// max of `f⁻¹(2s)/f⁻¹(s)` over the regime decades.
    pub doubling_max: f64,
    /// min of `f(r)|log r|` over the same decades.
    pub logtest_min: f64,
}

/// Grid evaluation of the doubling and logarithmic hypotheses over six
/// decades of `s = 1/t` toward the regime, with `f⁻¹(s) = law(1/s)`.
pub fn hypothesis_report(law: &RateLaw, regime: Regime) -> HypothesisReport {
    let (s0, s1) = match regime {
        Regime::Large => (1e-6_f64, 1.0),
        Regime::Small => (1.0, 1e6),
    };
    let inv = |s: f64| law.eval(1.0 / s);
    let mut doubling_max: f64 = 0.0;
    let mut logtest_min = f64::INFINITY;
    for k in 0..=60 {
        let s = s0 * (s1 / s0).powf(k as f64 / 60.0);
        let r = inv(s);
        doubling_max = doubling_max.max(inv(2.0 * s) / r);
        // f(r) = s at r = f⁻¹(s).
        logtest_min = logtest_min.min(s * r.ln().abs());
    }
    HypothesisReport { regime, doubling_max, logtest_min }
}
