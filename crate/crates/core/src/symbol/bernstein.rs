use crate::error::{LevyError, Result};

/// `f(λ) = λ^{α/2} (log(1+λ))^{β/2}`, the Bernstein function of a
/// subordinate Brownian motion with symbol `f(|ξ|²)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BernsteinSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl BernsteinSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(LevyError::InvalidModel(format!("bernstein alpha = {alpha} outside (0, 2)")));
        }
        // The upper endpoint is admitted: f stays increasing and the rate
        // examples are stated at α = β = 1.
        if !(beta > -alpha && beta <= 2.0 - alpha) {
            return Err(LevyError::InvalidModel(format!(
                "bernstein beta = {beta} outside (-alpha, 2 - alpha] = ({}, {}]",
                -alpha,
                2.0 - alpha
            )));
        }
        let spec = BernsteinSpec { alpha, beta };
        spec.check_monotone()?;
        Ok(spec)
    }

    pub fn f(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        (0.5 * self.ln_f_at_log(lambda.ln())).exp()
    }

    /// `2 log f(e^x)`.
    fn ln_f_at_log(&self, x: f64) -> f64 {
        // log log(1+λ) without underflow for tiny λ or overflow for huge λ.
        let lnl = if x < -30.0 {
            x - 0.5 * x.exp()
        } else if x > 30.0 {
            (x + (-x).exp().ln_1p()).ln()
        } else {
            x.exp().ln_1p().ln()
        };
        self.alpha * x + self.beta * lnl
    }

    /// Logarithmic derivative `d log f / d log λ`.
    pub fn elasticity(&self, lambda: f64) -> f64 {
        let l1p = lambda.ln_1p();
        let w = if lambda < 1e-8 { 1.0 - lambda / 2.0 } else { lambda / ((1.0 + lambda) * l1p) };
        0.5 * (self.alpha + self.beta * w)
    }

    /// `f⁻¹(s)` by safeguarded Newton iteration in log coordinates.
    pub fn inverse(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let target = 2.0 * s.ln();
        let g = |x: f64| self.ln_f_at_log(x) - target;
        // Initial guess from the dominant power law.
        let mut x = if s < 1.0 { target / (self.alpha + self.beta) } else { target / self.alpha };
        let (mut lo, mut hi) = (x - 1.0, x + 1.0);
        while g(lo) > 0.0 {
            lo -= 2.0 * (x - lo).max(1.0);
        }
        while g(hi) < 0.0 {
            hi += 2.0 * (hi - x).max(1.0);
        }
        x = x.clamp(lo, hi);
        for _ in 0..200 {
            let gx = g(x);
            if gx == 0.0 {
                return x.exp();
            }
            if gx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let slope = 2.0 * self.elasticity(x.exp());
            let mut next = x - gx / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() < 1e-15 * (1.0 + x.abs()) || hi - lo < 1e-15 * (1.0 + x.abs()) {
                return next.exp();
            }
            x = next;
        }
        x.exp()
    }

    /// The radial symbol `r ↦ f(r²)`.
    pub fn radial(&self, r: f64) -> f64 {
        self.f(r * r)
    }

    /// Inverse of the radial symbol, `s ↦ √(f⁻¹(s))`.
    pub fn radial_inverse(&self, s: f64) -> f64 {
        self.inverse(s).sqrt()
    }

    fn check_monotone(&self) -> Result<()> {
        let mut prev = 0.0;
        for k in 0..=480 {
            let lambda = 10f64.powf(-12.0 + k as f64 * 0.05);
            let v = self.f(lambda);
            if !(v > prev) {
                return Err(LevyError::InvalidModel(format!(
                    "bernstein function not strictly increasing near λ = {lambda:e}"
                )));
            }
            prev = v;
        }
        Ok(())
    }
}
