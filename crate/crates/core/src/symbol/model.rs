use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;

use super::bernstein::BernsteinSpec;
use super::explicit::ExplicitSymbol;
use super::family::{registry, ParamMap, RadialFamily};
use super::radial::Radial;
use super::spectral::SpectralMeasure;
use crate::error::{LevyError, Result};
use crate::quad::Quad;

#[derive(Debug, Clone)]
pub enum ModelKind {
    Polar {
        spectral: SpectralMeasure,
        family: Arc<dyn RadialFamily>,
    },
    SubordinateBm(BernsteinSpec),
    Explicit(ExplicitSymbol),
}

/// A pure-jump Lévy process in dimension 1 or 2.
#[derive(Debug, Clone)]
pub struct LevyModel {
    dim: usize,
    kind: ModelKind,
    center: bool,
}

/// Which part of the jump measure a symbol is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// Φ, compensated on the unit ball.
    Full,
    /// Φ_r, jumps of size ≤ r, fully compensated.
    Truncated(f64),
    /// Ψ_r = Φ − Φ_r.
    Residual(f64),
}

impl LevyModel {
    pub fn polar(spectral: SpectralMeasure, family: Arc<dyn RadialFamily>) -> Result<Self> {
        spectral.validate()?;
        Ok(LevyModel {
            dim: spectral.dim(),
            kind: ModelKind::Polar { spectral, family },
            center: true,
        })
    }

    /// Polar model with a family looked up in the registry.
    pub fn polar_named(spectral: SpectralMeasure, family: &str, params: &[(&str, f64)]) -> Result<Self> {
        let map: ParamMap = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let fam = registry().build(family, &map, spectral.dim())?;
        Self::polar(spectral, fam)
    }

    pub fn subordinate_bm(dim: usize, spec: BernsteinSpec) -> Result<Self> {
        check_dim(dim)?;
        Ok(LevyModel { dim, kind: ModelKind::SubordinateBm(spec), center: true })
    }

    pub fn explicit(dim: usize, symbol: ExplicitSymbol) -> Result<Self> {
        check_dim(dim)?;
        if let ExplicitSymbol::CompoundPoisson { jump, .. } = symbol {
            if dim == 1 && jump[1] != 0.0 {
                return Err(LevyError::InvalidModel("compound Poisson jump has a second component in d=1".into()));
            }
        }
        Ok(LevyModel { dim, kind: ModelKind::Explicit(symbol), center: true })
    }

    /// Sets the drift-removal flag (default on).
    pub fn with_center(mut self, center: bool) -> Self {
        self.center = center;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn center(&self) -> bool {
        self.center
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ModelKind::Polar { family, spectral } => {
                let params: Vec<String> = family.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
                let spec = match spectral {
                    SpectralMeasure::Atoms { atoms, .. } => format!("{} atoms", atoms.len()),
                    SpectralMeasure::Uniform { mass, .. } => format!("uniform mass {mass}"),
                };
                format!("polar {} {} ({spec}, d={})", family.name(), params.join(" "), self.dim)
            }
            ModelKind::SubordinateBm(b) => format!("subordinate-bm alpha={} beta={} d={}", b.alpha, b.beta, self.dim),
            ModelKind::Explicit(e) => format!("{} d={}", e.label(), self.dim),
        }
    }

    pub fn radial(&self) -> Option<Radial> {
        match &self.kind {
            ModelKind::Polar { family, .. } => Some(family.radial()),
            _ => None,
        }
    }

    pub fn spectral(&self) -> Option<&SpectralMeasure> {
        match &self.kind {
            ModelKind::Polar { spectral, .. } => Some(spectral),
            _ => None,
        }
    }

    pub fn family(&self) -> Option<&Arc<dyn RadialFamily>> {
        match &self.kind {
            ModelKind::Polar { family, .. } => Some(family),
            _ => None,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            ModelKind::Polar { spectral, .. } => spectral.is_symmetric(),
            _ => true,
        }
    }

    /// True when Φ depends on |ξ| only.
    pub fn is_isotropic(&self) -> bool {
        match &self.kind {
            ModelKind::Polar { spectral, .. } => match spectral {
                SpectralMeasure::Uniform { .. } => true,
                SpectralMeasure::Atoms { dim, .. } => *dim == 1 && spectral.is_symmetric(),
            },
            ModelKind::SubordinateBm(_) => true,
            ModelKind::Explicit(ExplicitSymbol::Power { .. }) => true,
            ModelKind::Explicit(ExplicitSymbol::CompoundPoisson { .. }) => self.dim == 1,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.kind, ModelKind::Explicit(ExplicitSymbol::CompoundPoisson { .. }))
    }

    pub(crate) fn require_polar(&self) -> Result<(&SpectralMeasure, Radial)> {
        match &self.kind {
            ModelKind::Polar { spectral, family } => Ok((spectral, family.radial())),
            _ => Err(LevyError::NoLevyMeasure(self.label())),
        }
    }

    /// Mean drift `b = ∫_{|y|≥1} y ν(dy)` removed when the model is centered;
    /// zero when the first moment is infinite or the model is symmetric.
    pub fn drift(&self) -> [f64; 2] {
        let Ok((spectral, radial)) = self.require_polar() else {
            return [0.0; 2];
        };
        if !self.center || spectral.is_symmetric() {
            return [0.0; 2];
        }
        match radial.moment(1.0, 1.0, f64::INFINITY) {
            Ok(m) => {
                let th = spectral.first_moment();
                [th[0] * m, th[1] * m]
            }
            Err(_) => [0.0; 2],
        }
    }

    /// Φ, Φ_r or Ψ_r at ξ by direct quadrature.
    pub fn eval_window(&self, xi: &[f64], window: Window) -> Result<Complex64> {
        if xi.len() != self.dim || xi.iter().any(|x| !x.is_finite()) {
            return Err(LevyError::InvalidArgument(format!(
                "frequency {xi:?} must be a finite vector of length {}",
                self.dim
            )));
        }
        if let Window::Truncated(r) | Window::Residual(r) = window {
            if !(r > 0.0) {
                return Err(LevyError::InvalidArgument(format!("truncation radius {r} must be positive")));
            }
        }
        match &self.kind {
            ModelKind::Polar { spectral, family } => polar_eval(spectral, &family.radial(), xi, window),
            _ if window != Window::Full => Err(LevyError::NoLevyMeasure(self.label())),
            ModelKind::SubordinateBm(b) => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                Ok(Complex64::new(b.f(r2), 0.0))
            }
            ModelKind::Explicit(e) => Ok(Complex64::new(e.eval(xi), 0.0)),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(LevyError::InvalidModel(format!("dimension {dim} is not 1 or 2")))
    }
}

/// `(R, S)` of one direction, `v ≥ 0`.
pub(crate) fn radial_window(radial: &Radial, v: f64, window: Window, want_im: bool) -> Result<(f64, f64)> {
    match window {
        Window::Full => radial.integrals(v, 0.0, f64::INFINITY, 1.0, want_im),
        Window::Truncated(r) => radial.integrals(v, 0.0, r, r, want_im),
        Window::Residual(r) => {
            let (re, mut im) = radial.integrals(v, r, f64::INFINITY, 1.0, want_im)?;
            if want_im && r > 1.0 {
                im -= v * radial.moment(1.0, 1.0, r)?;
            }
            Ok((re, im))
        }
    }
}

fn polar_eval(spectral: &SpectralMeasure, radial: &Radial, xi: &[f64], window: Window) -> Result<Complex64> {
    let want_im = !spectral.is_symmetric();
    match spectral.discrete() {
        Some(atoms) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in atoms {
                let u: f64 = xi.iter().zip(a.direction.iter()).map(|(x, t)| x * t).sum();
                if u == 0.0 {
                    continue;
                }
                let (re, im) = radial_window(radial, u.abs(), window, want_im)?;
                acc += Complex64::new(re, u.signum() * im) * a.weight;
            }
            Ok(acc)
        }
        None => {
            let rho = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            if rho == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let mass = spectral.total_mass();
            let mut failure = None;
            let quad = Quad::new(1e-10);
            let est = quad.integrate(
                |th: f64| match radial_window(radial, rho * th.cos(), window, false) {
                    Ok((re, _)) => re,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                0.0,
                FRAC_PI_2,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(Complex64::new(2.0 * mass / std::f64::consts::PI * est.value, 0.0))
        }
    }
}
