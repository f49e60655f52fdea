//! Lévy models and their characteristic exponents.

mod bernstein;
mod compiled;
mod explicit;
mod family;
mod measure;
mod model;
mod profile;
pub mod radial;
mod spec;
mod spectral;

pub use bernstein::BernsteinSpec;
pub use compiled::CompiledSymbol;
pub use explicit::ExplicitSymbol;
pub use family::{registry, FamilyEntry, ParamMap, ParamSpec, RadialFamily, Registry};
pub use family::{Lamperti, Layered, Relativistic, Stable, Tempered, Truncated};
pub use measure::{decompose_check, levy_moment, DecomposeReport, Region};
pub use model::{LevyModel, ModelKind, Window};
pub use profile::{hw_index, HwReport, PhiProfile, DIRECTION_MARGIN};
pub use spec::{load_model, model_from_value, model_to_value, parse_model};
pub use spectral::{Atom, SpectralMeasure};

use num_complex::Complex64;

use crate::error::Result;

/// Φ(ξ).
pub fn eval_symbol(model: &LevyModel, xi: &[f64]) -> Result<Complex64> {
    model.eval_window(xi, Window::Full)
}

/// Φ_r(ξ), the exponent of the fully compensated jumps of size ≤ r.
pub fn eval_truncated(model: &LevyModel, r: f64, xi: &[f64]) -> Result<Complex64> {
    model.eval_window(xi, Window::Truncated(r))
}

/// Ψ_r(ξ) = Φ(ξ) − Φ_r(ξ).
pub fn eval_residual(model: &LevyModel, r: f64, xi: &[f64]) -> Result<Complex64> {
    model.eval_window(xi, Window::Residual(r))
}

pub fn phi_profile(
    model: &LevyModel,
    rho_min: f64,
    rho_max: f64,
    n_points: usize,
    n_directions: usize,
) -> Result<PhiProfile> {
    PhiProfile::new(model, rho_min, rho_max, n_points, n_directions)
}

pub fn phi_inverse(profile: &PhiProfile, s: f64) -> Result<f64> {
    profile.inverse(s)
}

pub fn h_of_t(profile: &PhiProfile, t: f64) -> Result<f64> {
    profile.h_of_t(t)
}

/// Which part of a model a density or rate computation uses.
#[derive(Debug, Clone, Copy)]
pub struct SymbolSource<'a> {
    pub model: &'a LevyModel,
    pub truncation: Option<f64>,
}

impl<'a> SymbolSource<'a> {
    pub fn full(model: &'a LevyModel) -> Self {
        SymbolSource { model, truncation: None }
    }

    pub fn truncated(model: &'a LevyModel, r: f64) -> Self {
        SymbolSource { model, truncation: Some(r) }
    }

    pub fn window(&self) -> Window {
        match self.truncation {
            None => Window::Full,
            Some(r) => Window::Truncated(r),
        }
    }

    pub fn eval(&self, xi: &[f64]) -> Result<Complex64> {
        self.model.eval_window(xi, self.window())
    }

    pub fn compile(&self, u_min: f64, u_max: f64) -> Result<CompiledSymbol> {
        CompiledSymbol::new(self.model, self.window(), u_min, u_max)
    }
}
