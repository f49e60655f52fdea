use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{LevyError, Result};

/// Symbols given in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExplicitSymbol {
    /// `scale · |ξ|^α`, α ∈ (0, 2].
    Power { alpha: f64, scale: f64 },
    /// `rate · (1 − cos⟨a, ξ⟩)`: jumps ±a, each with intensity rate/2.
    CompoundPoisson { rate: f64, jump: [f64; 2] },
}

impl ExplicitSymbol {
    pub fn power(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(LevyError::InvalidModel(format!("power alpha = {alpha} outside (0, 2]")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(LevyError::InvalidModel(format!("power scale = {scale} must be positive")));
        }
        Ok(ExplicitSymbol::Power { alpha, scale })
    }

    pub fn compound_poisson(rate: f64, jump: [f64; 2]) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(LevyError::InvalidModel(format!("compound Poisson rate = {rate} must be positive")));
        }
        if jump[0] == 0.0 && jump[1] == 0.0 {
            return Err(LevyError::InvalidModel("compound Poisson jump must be nonzero".into()));
        }
        Ok(ExplicitSymbol::CompoundPoisson { rate, jump })
    }

    /// Φ(ξ); both variants are real.
    pub fn eval(&self, xi: &[f64]) -> f64 {
        match *self {
            ExplicitSymbol::Power { alpha, scale } => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                if r2 == 0.0 {
                    0.0
                } else if alpha == 2.0 {
                    scale * r2
                } else {
                    scale * r2.powf(alpha / 2.0)
                }
            }
            ExplicitSymbol::CompoundPoisson { rate, jump } => {
                let dot: f64 = xi.iter().zip(jump.iter()).map(|(x, a)| x * a).sum();
                rate * (1.0 - dot.cos())
            }
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, ExplicitSymbol::CompoundPoisson { .. })
    }

    /// Lévy density of the one-dimensional power symbol at `|y|`:
    /// `scale · Γ(1+α) sin(πα/2)/π · |y|^{−1−α}`. None when there is none
    /// (α = 2) or the symbol is not a one-dimensional power law.
    pub fn line_density_coefficient(&self) -> Option<f64> {
        match *self {
            ExplicitSymbol::Power { alpha, scale } if alpha < 2.0 => {
                Some(scale * gamma(1.0 + alpha) * (PI * alpha / 2.0).sin() / PI)
            }
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ExplicitSymbol::Power { alpha, scale } => format!("explicit power alpha={alpha} scale={scale}"),
            ExplicitSymbol::CompoundPoisson { rate, jump } => {
                format!("explicit compound-poisson rate={rate} jump=({}, {})", jump[0], jump[1])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_values() {
        let p = ExplicitSymbol::power(1.0, 1.0).unwrap();
        assert_eq!(p.eval(&[0.0]), 0.0);
        assert!((p.eval(&[-3.0]) - 3.0).abs() < 1e-15);
        let g = ExplicitSymbol::power(2.0, 1.0).unwrap();
        assert_eq!(g.eval(&[3.0, 4.0]), 25.0);
        assert!(g.line_density_coefficient().is_none());
        // Cauchy: Lévy density 1/(π y²).
        assert!((p.line_density_coefficient().unwrap() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn compound_poisson_bounded() {
        let c = ExplicitSymbol::compound_poisson(2.0, [1.0, 0.0]).unwrap();
        assert!(c.is_bounded());
        assert!((c.eval(&[PI]) - 4.0).abs() < 1e-15);
    }
}
