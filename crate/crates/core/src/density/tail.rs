//! First-order tail model `p_t(y) ≈ t·k(y)` on the line, where `k` is the
//! Lévy density. Used to undo lattice aliasing of heavy tails and to account
//! for mass outside the window.

use std::f64::consts::PI;

use crate::error::Result;
use crate::quad::Quad;
use crate::symbol::radial::{Kernel, Piece, Radial};
use crate::symbol::{LevyModel, ModelKind, SpectralMeasure, SymbolSource};

/// Lévy density on the line: `w₊ Q(y)` for y > 0, `w₋ Q(−y)` for y < 0.
#[derive(Debug, Clone)]
pub struct LineTail {
    radial: Radial,
    w_plus: f64,
    w_minus: f64,
}

impl LineTail {
    /// The tail model of a one-dimensional source, when it has a Lévy density.
    pub fn of(source: &SymbolSource<'_>) -> Option<Self> {
        let model: &LevyModel = source.model;
        if model.dim() != 1 {
            return None;
        }
        let (radial, w_plus, w_minus) = match model.kind() {
            ModelKind::Polar { spectral, family } => {
                let (wp, wm) = match spectral {
                    SpectralMeasure::Uniform { mass, .. } => (mass / 2.0, mass / 2.0),
                    SpectralMeasure::Atoms { atoms, .. } => atoms.iter().fold((0.0, 0.0), |(p, m), a| {
                        if a.direction[0] > 0.0 {
                            (p + a.weight, m)
                        } else {
                            (p, m + a.weight)
                        }
                    }),
                };
                (family.radial(), wp, wm)
            }
            ModelKind::Explicit(e) => {
                let coef = e.line_density_coefficient()?;
                let alpha = match e {
                    crate::symbol::ExplicitSymbol::Power { alpha, .. } => *alpha,
                    _ => return None,
                };
                let r = Radial::new(vec![Piece {
                    start: 0.0,
                    end: f64::INFINITY,
                    kernel: Kernel::Power { coef, gamma: alpha },
                }]);
                (r, 1.0, 1.0)
            }
            ModelKind::SubordinateBm(_) => return None,
        };
        let radial = match source.truncation {
            None => radial,
            Some(r) => Radial::new(
                radial
                    .pieces
                    .iter()
                    .filter(|p| p.start < r)
                    .map(|p| Piece { end: p.end.min(r), ..*p })
                    .collect(),
            ),
        };
        Some(LineTail { radial, w_plus, w_minus })
    }

    pub fn density(&self, y: f64) -> f64 {
        if y > 0.0 {
            self.w_plus * self.radial.value(y)
        } else if y < 0.0 {
            self.w_minus * self.radial.value(-y)
        } else {
            0.0
        }
    }

    /// `∫_x^∞ k(y) dy` for x > 0 (the `side` selects ±).
    pub fn tail_mass(&self, x: f64, positive: bool) -> Result<f64> {
        let w = if positive { self.w_plus } else { self.w_minus };
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * self.radial.tail_mass(x)?)
    }

    /// True when the density decays like a power at infinity (aliasing is
    /// then worth correcting).
    pub fn heavy(&self) -> bool {
        self.radial
            .pieces
            .iter()
            .any(|p| p.end.is_infinite() && matches!(p.kernel, Kernel::Power { .. }))
    }

    /// Finite breakpoints of the density.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .radial
            .pieces
            .iter()
            .flat_map(|p| [p.start, p.end])
            .filter(|x| *x > 0.0 && x.is_finite())
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// `∫_{|y|>L} |a(y) − b(y)| dy` with both functions built from `t·k`.
    pub(crate) fn outside_integral<F>(&self, l: f64, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let quad = Quad::new(1e-9).with_abs(1e-16);
        let right = quad.integrate_to_infinity(|y: f64| f(y), l, l)?.value;
        let left = quad.integrate_to_infinity(|y: f64| f(-y), l, l)?.value;
        Ok(right + left)
    }
}

/// Chebyshev series on `[a, b]`.
#[derive(Debug, Clone)]
pub(crate) struct Cheb {
    a: f64,
    b: f64,
    c: Vec<f64>,
}

impl Cheb {
    pub(crate) fn fit<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, mut f: F) -> Self {
        let vals: Vec<f64> = (0..n)
            .map(|k| {
                let x = (PI * (k as f64 + 0.5) / n as f64).cos();
                f(0.5 * (a + b) + 0.5 * (b - a) * x)
            })
            .collect();
        let c = (0..n)
            .map(|j| {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                let w = if j == 0 { 1.0 } else { 2.0 };
                w * s / n as f64
            })
            .collect();
        Cheb { a, b, c }
    }

    pub(crate) fn eval(&self, y: f64) -> f64 {
        let x = (2.0 * y - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.c.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.c[0]
    }

    pub(crate) fn derivative(&self) -> Self {
        let n = self.c.len();
        let mut d = vec![0.0; n.max(1)];
        if n >= 2 {
            // c'_{k-1} = c'_{k+1} + 2k c_k
            for k in (1..n).rev() {
                let next = if k + 1 < n { d[k + 1] } else { 0.0 };
                d[k - 1] = next + 2.0 * k as f64 * self.c[k];
            }
            d[0] *= 0.5;
        }
        let scale = 2.0 / (self.b - self.a);
        Cheb { a: self.a, b: self.b, c: d.into_iter().map(|v| v * scale).collect() }
    }
}

/// Image sum `S(y) = Σ_{m≠0} t·k(y + 2mL)` on `[−span, span]`, as a
/// Chebyshev series (or its derivative of order `order`).
#[derive(Debug)]
pub(crate) struct ImageCorrection {
    series: Cheb,
}

const DIRECT_IMAGES: i32 = 24;

impl ImageCorrection {
    pub(crate) fn new(tail: &LineTail, t: f64, l: f64, drift: f64, order: u32) -> Result<Option<Self>> {
        if !tail.heavy() {
            return Ok(None);
        }
        // The image sum is only smooth when no breakpoint lies in the image
        // region; then skip the correction.
        if tail.breakpoints().iter().any(|&b| b > 0.7 * l) {
            return Ok(None);
        }
        let span = 1.3 * l;
        let period = 2.0 * l;
        let m = DIRECT_IMAGES as f64;
        let mut err = None;
        let series = Cheb::fit(-span, span, 64, |y| {
            let mut s = 0.0;
            for k in 1..=DIRECT_IMAGES {
                s += tail.density(y + drift + k as f64 * period) + tail.density(y + drift - k as f64 * period);
            }
            // Midpoint-rule remainder for |m| > M.
            let hi = (m + 0.5) * period;
            let rest = tail.tail_mass(hi + y + drift, true).and_then(|p| {
                tail.tail_mass(hi - y - drift, false).map(|q| (p + q) / period)
            });
            match rest {
                Ok(r) => t * (s + r),
                Err(e) => {
                    err.get_or_insert(e);
                    t * s
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut series = series;
        for _ in 0..order {
            series = series.derivative();
        }
        Ok(Some(ImageCorrection { series }))
    }

    pub(crate) fn at(&self, y: f64) -> f64 {
        self.series.eval(y)
    }
}
