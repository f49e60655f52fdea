//! Radial profile families, registered by name.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::radial::{Kernel, Piece, Radial};
use crate::error::{LevyError, Result};

pub type ParamMap = BTreeMap<String, f64>;

/// A radial jump profile `Q(s)`, shared by every direction of the spectral
/// measure.
pub trait RadialFamily: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    /// Resolved parameters, in schema order.
    fn params(&self) -> Vec<(&'static str, f64)>;
    fn radial(&self) -> Radial;
    /// Index α with Q(s) ≍ s^{−1−α} near the origin.
    fn index(&self) -> f64;
    /// `sup f(θ) − inf f(θ)` for direction-dependent profiles.
    fn directional_spread(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub range: &'static str,
    pub default: Option<f64>,
}

type Builder = fn(&ParamMap, usize) -> Result<Arc<dyn RadialFamily>>;

#[derive(Clone, Copy)]
pub struct FamilyEntry {
    pub name: &'static str,
    pub density: &'static str,
    pub params: &'static [ParamSpec],
    build: Builder,
}

impl fmt::Debug for FamilyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyEntry").field("name", &self.name).finish()
    }
}

#[derive(Debug, Default)]
pub struct Registry {
    entries: BTreeMap<&'static str, FamilyEntry>,
}

impl Registry {
    pub fn register(&mut self, entry: FamilyEntry) {
        self.entries.insert(entry.name, entry);
    }

    pub fn entries(&self) -> impl Iterator<Item = &FamilyEntry> {
        self.entries.values()
    }

    pub fn get(&self, name: &str) -> Option<&FamilyEntry> {
        self.entries.get(name)
    }

    /// Builds a family from raw parameters: unknown names are rejected,
    /// defaults filled in, ranges and integrability checked.
    pub fn build(&self, name: &str, raw: &ParamMap, dim: usize) -> Result<Arc<dyn RadialFamily>> {
        let entry = self.get(name).ok_or_else(|| {
            let known: Vec<_> = self.entries.keys().copied().collect();
            LevyError::spec("family", format!("unknown family `{name}` (known: {})", known.join(", ")))
        })?;
        for key in raw.keys() {
            if !entry.params.iter().any(|p| p.name == key) {
                return Err(LevyError::spec(key.clone(), format!("unknown parameter for family `{name}`")));
            }
        }
        let mut params = ParamMap::new();
        for spec in entry.params {
            let v = match (raw.get(spec.name), spec.default) {
                (Some(v), _) => *v,
                (None, Some(d)) => d,
                (None, None) => {
                    return Err(LevyError::spec(spec.name, format!("missing parameter for family `{name}`")))
                }
            };
            params.insert(spec.name.to_string(), v);
        }
        let fam = (entry.build)(&params, dim)?;
        check_integrable(fam.as_ref())?;
        Ok(fam)
    }
}

/// Registry holding the six built-in families.
pub fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r = Registry::default();
        for e in builtin_entries() {
            r.register(e);
        }
        r
    })
}

fn check_integrable(fam: &dyn RadialFamily) -> Result<()> {
    let r = fam.radial();
    let inner = r.moment(2.0, 0.0, 1.0);
    let outer = r.moment(0.0, 1.0, f64::INFINITY);
    match (inner, outer) {
        (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => Ok(()),
        _ => Err(LevyError::InvalidModel(format!(
            "∫(1 ∧ s²) Q(s) ds is not finite for family `{}`",
            fam.name()
        ))),
    }
}

fn in_open(name: &str, v: f64, lo: f64, hi: f64) -> Result<f64> {
    if v > lo && v < hi {
        Ok(v)
    } else {
        Err(LevyError::InvalidModel(format!("{name} = {v} outside ({lo}, {hi})")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(LevyError::InvalidModel(format!("{name} = {v} must be positive and finite")))
    }
}

const ALPHA: ParamSpec = ParamSpec { name: "alpha", range: "(0, 2)", default: None };

fn power(gamma: f64) -> Kernel {
    Kernel::Power { coef: 1.0, gamma }
}

#[derive(Debug, Clone)]
pub struct Stable {
    pub alpha: f64,
}

impl RadialFamily for Stable {
    fn name(&self) -> &'static str {
        "stable"
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha)]
    }
    fn radial(&self) -> Radial {
        Radial::new(vec![Piece { start: 0.0, end: f64::INFINITY, kernel: power(self.alpha) }])
    }
    fn index(&self) -> f64 {
        self.alpha
    }
}

/// `s^{−1−α}` on `(0, r0]`, `s^{−1−β}` beyond; `β = ∞` drops the tail.
#[derive(Debug, Clone)]
pub struct Layered {
    pub alpha: f64,
    pub beta: f64,
    pub r0: f64,
}

impl RadialFamily for Layered {
    fn name(&self) -> &'static str {
        "layered"
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("beta", self.beta), ("r0", self.r0)]
    }
    fn radial(&self) -> Radial {
        let mut pieces = vec![Piece { start: 0.0, end: self.r0, kernel: power(self.alpha) }];
        if self.beta.is_finite() {
            pieces.push(Piece { start: self.r0, end: f64::INFINITY, kernel: power(self.beta) });
        }
        Radial::new(pieces)
    }
    fn index(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone)]
pub struct Tempered {
    pub alpha: f64,
    pub c: f64,
}

impl RadialFamily for Tempered {
    fn name(&self) -> &'static str {
        "tempered"
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("c", self.c)]
    }
    fn radial(&self) -> Radial {
        Radial::new(vec![Piece {
            start: 0.0,
            end: f64::INFINITY,
            kernel: Kernel::Tempered { alpha: self.alpha, rate: self.c },
        }])
    }
    fn index(&self) -> f64 {
        self.alpha
    }
}

/// `s^{−1−α}(1+s)^{(d+α−1)/2} e^{−s}`.
#[derive(Debug, Clone)]
pub struct Relativistic {
    pub alpha: f64,
    pub dim: usize,
}

impl RadialFamily for Relativistic {
    fn name(&self) -> &'static str {
        "relativistic"
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha)]
    }
    fn radial(&self) -> Radial {
        let power = (self.dim as f64 + self.alpha - 1.0) / 2.0;
        Radial::new(vec![Piece {
            start: 0.0,
            end: f64::INFINITY,
            kernel: Kernel::Relativistic { alpha: self.alpha, power },
        }])
    }
    fn index(&self) -> f64 {
        self.alpha
    }
}

/// `e^{f s}/(e^s − 1)^{1+α}` with a direction-independent exponent `f`.
#[derive(Debug, Clone)]
pub struct Lamperti {
    pub alpha: f64,
    pub f: f64,
}

impl RadialFamily for Lamperti {
    fn name(&self) -> &'static str {
        "lamperti"
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("f", self.f)]
    }
    fn radial(&self) -> Radial {
        Radial::new(vec![Piece {
            start: 0.0,
            end: f64::INFINITY,
            kernel: Kernel::Lamperti { alpha: self.alpha, f: self.f },
        }])
    }
    fn index(&self) -> f64 {
        self.alpha
    }
}

#[derive(Debug, Clone)]
pub struct Truncated {
    pub alpha: f64,
    pub r0: f64,
}

impl RadialFamily for Truncated {
    fn name(&self) -> &'static str {
        "truncated"
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("r0", self.r0)]
    }
    fn radial(&self) -> Radial {
        Radial::new(vec![Piece { start: 0.0, end: self.r0, kernel: power(self.alpha) }])
    }
    fn index(&self) -> f64 {
        self.alpha
    }
}

fn builtin_entries() -> Vec<FamilyEntry> {
    vec![
        FamilyEntry {
            name: "stable",
            density: "s^(-1-alpha)",
            params: &[ALPHA],
            build: |p, _| Ok(Arc::new(Stable { alpha: in_open("alpha", p["alpha"], 0.0, 2.0)? })),
        },
        FamilyEntry {
            name: "layered",
            density: "s^(-1-alpha) on (0,r0], s^(-1-beta) on (r0,inf); beta = \"inf\" drops the tail",
            params: &[
                ALPHA,
                ParamSpec { name: "beta", range: "(0, inf]", default: None },
                ParamSpec { name: "r0", range: "(0, inf)", default: Some(1.0) },
            ],
            build: |p, _| {
                let beta = p["beta"];
                if !(beta > 0.0) {
                    return Err(LevyError::InvalidModel(format!("beta = {beta} must be in (0, inf]")));
                }
                Ok(Arc::new(Layered {
                    alpha: in_open("alpha", p["alpha"], 0.0, 2.0)?,
                    beta,
                    r0: positive("r0", p["r0"])?,
                }))
            },
        },
        FamilyEntry {
            name: "tempered",
            density: "s^(-1-alpha) exp(-c s)",
            params: &[ALPHA, ParamSpec { name: "c", range: "(0, inf)", default: Some(1.0) }],
            build: |p, _| {
                Ok(Arc::new(Tempered {
                    alpha: in_open("alpha", p["alpha"], 0.0, 2.0)?,
                    c: positive("c", p["c"])?,
                }))
            },
        },
        FamilyEntry {
            name: "relativistic",
            density: "s^(-1-alpha) (1+s)^((d+alpha-1)/2) exp(-s)",
            params: &[ALPHA],
            build: |p, dim| {
                Ok(Arc::new(Relativistic {
                    alpha: in_open("alpha", p["alpha"], 0.0, 2.0)?,
                    dim,
                }))
            },
        },
        FamilyEntry {
            name: "lamperti",
            density: "exp(f s) / (exp(s) - 1)^(1+alpha), constant f < 1 + alpha",
            params: &[ALPHA, ParamSpec { name: "f", range: "(-inf, 1+alpha)", default: Some(0.0) }],
            build: |p, _| {
                let alpha = in_open("alpha", p["alpha"], 0.0, 2.0)?;
                let f = p["f"];
                if !(f < 1.0 + alpha) || !f.is_finite() {
                    return Err(LevyError::InvalidModel(format!("f = {f} must be finite and below 1 + alpha")));
                }
                Ok(Arc::new(Lamperti { alpha, f }))
            },
        },
        FamilyEntry {
            name: "truncated",
            density: "s^(-1-alpha) on (0, r0]",
            params: &[ALPHA, ParamSpec { name: "r0", range: "(0, inf)", default: Some(1.0) }],
            build: |p, _| {
                Ok(Arc::new(Truncated {
                    alpha: in_open("alpha", p["alpha"], 0.0, 2.0)?,
                    r0: positive("r0", p["r0"])?,
                }))
            },
        },
    ]
}
