//! Radial jump densities Q(s) and the one-dimensional integrals that make up
//! the symbol of a polar Lévy measure.
//!
//! For a direction with projection `u = ⟨θ, ξ⟩ > 0` the symbol contribution is
//! `R(u) + i·S(u)` with
//!
//! ```text
//! R(u) = ∫ (1 − cos su) Q(s) ds,      S(u) = ∫ (su·1{s<κ} − sin su) Q(s) ds,
//! ```
//!
//! both taken over a radial window `[lo, hi]`; `κ` is the compensation radius
//! (1 for the full symbol, r for the fully compensated truncation).
//! Near the origin the integrands are expanded in powers of `su` and
//! integrated against the moments of Q; beyond `s = 1/u` the oscillatory part
//! is evaluated on the rotated contour `s = x + iw/u`.

use num_complex::Complex64;

use crate::error::{LevyError, Result};
use crate::quad::Quad;

const SERIES_TERMS: usize = 8;
const MOMENT_TOL: f64 = 1e-12;

/// Analytic building blocks of the radial profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `coef · s^{−1−γ}`
    Power { coef: f64, gamma: f64 },
    /// `s^{−1−α} e^{−c s}`
    Tempered { alpha: f64, rate: f64 },
    /// `s^{−1−α} (1+s)^p e^{−s}`
    Relativistic { alpha: f64, power: f64 },
    /// `e^{f s} (e^s − 1)^{−1−α}`
    Lamperti { alpha: f64, f: f64 },
}

impl Kernel {
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            Kernel::Power { coef, gamma } => coef * s.powf(-1.0 - gamma),
            Kernel::Tempered { alpha, .. }
            | Kernel::Relativistic { alpha, .. }
            | Kernel::Lamperti { alpha, .. } => s.powf(-1.0 - alpha) * self.smooth(s),
        }
    }

    /// Index of the singularity at the origin: Q(s) ≍ s^{−1−index}.
    pub fn index(&self) -> f64 {
        match *self {
            Kernel::Power { gamma, .. } => gamma,
            Kernel::Tempered { alpha, .. }
            | Kernel::Relativistic { alpha, .. }
            | Kernel::Lamperti { alpha, .. } => alpha,
        }
    }

    /// `s^{1+α} Q(s)` for the exponentially damped kernels; bounded near 0.
    fn smooth(&self, s: f64) -> f64 {
        match *self {
            Kernel::Power { coef, .. } => coef,
            Kernel::Tempered { rate, .. } => (-rate * s).exp(),
            Kernel::Relativistic { power, .. } => (1.0 + s).powf(power) * (-s).exp(),
            Kernel::Lamperti { alpha, f } => {
                let ratio = if s < 1e-300 { 1.0 } else { s / -(-s).exp_m1() };
                ((f - 1.0 - alpha) * s).exp() * ratio.powf(1.0 + alpha)
            }
        }
    }

    /// Analytic continuation to `Re z > 0`.
    pub fn value_c(&self, z: Complex64) -> Complex64 {
        match *self {
            Kernel::Power { coef, gamma } => z.powf(-1.0 - gamma) * coef,
            Kernel::Tempered { alpha, rate } => z.powf(-1.0 - alpha) * (-rate * z).exp(),
            Kernel::Relativistic { alpha, power } => {
                z.powf(-1.0 - alpha) * (z + 1.0).powf(power) * (-z).exp()
            }
            Kernel::Lamperti { alpha, f } => {
                let one_minus = if z.norm() < 1e-3 {
                    z * (1.0 - z * (0.5 - z * (1.0 / 6.0 - z / 24.0)))
                } else {
                    1.0 - (-z).exp()
                };
                ((f - 1.0 - alpha) * z).exp() * one_minus.powf(-1.0 - alpha)
            }
        }
    }

    /// Exponential decay rate at infinity, if any.
    pub fn decay_rate(&self) -> Option<f64> {
        match *self {
            Kernel::Power { .. } => None,
            Kernel::Tempered { rate, .. } => Some(rate),
            Kernel::Relativistic { .. } => Some(1.0),
            Kernel::Lamperti { alpha, f } => Some(1.0 + alpha - f),
        }
    }

    /// `∫_a^b s^p Q(s) ds` for `0 ≤ a < b ≤ ∞`.
    pub fn moment(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        if !(b > a) {
            return Ok(0.0);
        }
        let idx = self.index();
        if a == 0.0 && p <= idx {
            return Err(LevyError::DivergentMoment(format!(
                "∫ s^{p} Q(s) ds diverges at the origin (Q ≍ s^(-1-{idx}))"
            )));
        }
        match *self {
            Kernel::Power { coef, gamma } => {
                let e = p - gamma;
                if b.is_infinite() && e >= 0.0 {
                    return Err(LevyError::DivergentMoment(format!(
                        "∫ s^{p} Q(s) ds diverges at infinity (Q ≍ s^(-1-{gamma}))"
                    )));
                }
                if e == 0.0 {
                    Ok(coef * (b / a).ln())
                } else {
                    let hi = if b.is_infinite() { 0.0 } else { b.powf(e) };
                    let lo = if a == 0.0 { 0.0 } else { a.powf(e) };
                    Ok(coef * (hi - lo) / e)
                }
            }
            _ => self.numeric_moment(p, a, b),
        }
    }

    fn numeric_moment(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        let quad = Quad::new(MOMENT_TOL);
        let idx = self.index();
        let m = b.min(1.0);
        let mut total = 0.0;
        if a < m {
            let e = p - idx;
            if e > 0.0 {
                // s = m x^{1/e} removes the algebraic singularity.
                let x0 = if a == 0.0 { 0.0 } else { (a / m).powf(e) };
                let g = |x: f64| self.smooth(m * x.powf(1.0 / e));
                total += m.powf(e) / e * quad.integrate(g, x0, 1.0)?.value;
            } else {
                let g = |v: f64| {
                    let s = v.exp();
                    s.powf(p + 1.0) * self.value(s)
                };
                total += quad.integrate(g, a.ln(), m.ln())?.value;
            }
        }
        let lo = a.max(m);
        if b > lo {
            let rate = self.decay_rate().unwrap_or(1.0);
            let grow = match *self {
                Kernel::Relativistic { power, .. } => power.max(0.0),
                _ => 0.0,
            };
            let scale = (1.0 + p.abs() + grow) / rate;
            let g = |s: f64| s.powf(p) * self.value(s);
            let far = if b.is_infinite() || b - lo > 80.0 * scale {
                let full = quad.integrate_to_infinity(g, lo, scale)?.value;
                if b.is_infinite() {
                    full
                } else {
                    full - quad.integrate_to_infinity(g, b, scale)?.value
                }
            } else {
                quad.integrate(g, lo, b)?.value
            };
            total += far;
        }
        Ok(total)
    }

    /// `F(x) = ∫_x^∞ e^{isu} Q(s) ds` for `x, u > 0`, on the contour
    /// `s = x + iw/u`.
    fn oscillatory_tail(&self, x: f64, u: f64) -> Result<Complex64> {
        let xu = x * u;
        let mut points = vec![0.0];
        for p in [0.1 * xu, xu, 10.0 * xu, 1.0, 5.0, 15.0] {
            if p > 0.0 && p < 50.0 {
                points.push(p);
            }
        }
        points.push(50.0);
        points.sort_by(f64::total_cmp);
        points.dedup();
        let scale = self.value(x).abs();
        let quad = Quad::new(1e-12).with_abs(1e-17 * scale);
        let g = |w: f64| self.value_c(Complex64::new(x, w / u)) * (-w).exp();
        let int = quad.integrate_points(g, &points)?.value;
        Ok(Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0 / u, xu) * int)
    }
}

/// A kernel restricted to `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub kernel: Kernel,
}

/// Piecewise radial jump density.
#[derive(Debug, Clone, PartialEq)]
pub struct Radial {
    pub pieces: Vec<Piece>,
}

impl Radial {
    pub fn new(pieces: Vec<Piece>) -> Self {
        Radial { pieces }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| s > p.start && s <= p.end)
            .map(|p| p.kernel.value(s))
            .sum()
    }

    /// Largest support point (∞ for unbounded jumps).
    pub fn support_end(&self) -> f64 {
        self.pieces.iter().map(|p| p.end).fold(0.0, f64::max)
    }

    /// Index of the singularity at the origin.
    pub fn index(&self) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.start == 0.0)
            .map(|p| p.kernel.index())
            .fold(0.0, f64::max)
    }

    /// Pieces clipped to `(a, b]`, with nonempty support.
    fn clipped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64, &Kernel)> {
        self.pieces.iter().filter_map(move |p| {
            let lo = p.start.max(a);
            let hi = p.end.min(b);
            (hi > lo).then_some((lo, hi, &p.kernel))
        })
    }

    /// `∫_a^b s^p Q(s) ds`.
    pub fn moment(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        let mut total = 0.0;
        for (lo, hi, k) in self.clipped(a, b) {
            total += k.moment(p, lo, hi)?;
        }
        Ok(total)
    }

    /// `∫_x^∞ Q(s) ds`.
    pub fn tail_mass(&self, x: f64) -> Result<f64> {
        self.moment(0.0, x, f64::INFINITY)
    }

    /// `(R(u), S(u))` over the window `(lo, hi]` with compensation radius
    /// `kappa`; `u ≥ 0`. The imaginary part is skipped (left 0) unless
    /// `want_im`.
    pub fn integrals(&self, u: f64, lo: f64, hi: f64, kappa: f64, want_im: bool) -> Result<(f64, f64)> {
        if u == 0.0 {
            return Ok((0.0, 0.0));
        }
        let c = 1.0 / u;
        let mut re = 0.0;
        let mut im = 0.0;
        for (a0, b0, k) in self.clipped(lo, hi) {
            let mut cuts = vec![a0];
            for p in [c, kappa] {
                if p > a0 && p < b0 {
                    cuts.push(p);
                }
            }
            cuts.push(b0);
            cuts.sort_by(f64::total_cmp);
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let compensated = b <= kappa;
                if b <= c {
                    let (dr, di) = series_part(k, u, a, b, compensated, want_im)?;
                    re += dr;
                    im += di;
                } else {
                    let fa = k.oscillatory_tail(a, u)?;
                    let fb = if b.is_infinite() {
                        Complex64::new(0.0, 0.0)
                    } else {
                        k.oscillatory_tail(b, u)?
                    };
                    let d = fa - fb;
                    re += k.moment(0.0, a, b)? - d.re;
                    if want_im {
                        im -= d.im;
                        if compensated {
                            im += u * k.moment(1.0, a, b)?;
                        }
                    }
                }
            }
        }
        Ok((re.max(0.0), im))
    }
}

fn series_part(k: &Kernel, u: f64, a: f64, b: f64, compensated: bool, want_im: bool) -> Result<(f64, f64)> {
    // 1 − cos x = Σ_{j≥1} (−1)^{j+1} x^{2j}/(2j)!
    let mut re = 0.0;
    let mut fact = 1.0;
    let mut upow = 1.0;
    let mut terms = Vec::with_capacity(2 * SERIES_TERMS + 2);
    for n in 1..=(2 * SERIES_TERMS + 1) {
        fact *= n as f64;
        upow *= u;
        terms.push(upow / fact);
    }
    for j in 1..=SERIES_TERMS {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        re += sign * terms[2 * j - 1] * k.moment(2.0 * j as f64, a, b)?;
    }
    let mut im = 0.0;
    if want_im {
        // x − sin x = Σ_{j≥1} (−1)^{j+1} x^{2j+1}/(2j+1)!; −sin x also has the j = 0 term.
        let first = if compensated { 1 } else { 0 };
        for j in first..=SERIES_TERMS {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let term = terms[2 * j] * k.moment(2.0 * j as f64 + 1.0, a, b)?;
            im += sign * term;
        }
    }
    Ok((re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn stable(alpha: f64) -> Radial {
        Radial::new(vec![Piece {
            start: 0.0,
            end: f64::INFINITY,
            kernel: Kernel::Power { coef: 1.0, gamma: alpha },
        }])
    }

    #[test]
    fn cauchy_radial_integral() {
        // ∫ (1 − cos su) s^{-2} ds = πu/2
        let r = stable(1.0);
        for u in [1e-3, 0.5, 1.0, 7.0, 1e4] {
            let (re, im) = r.integrals(u, 0.0, f64::INFINITY, 1.0, false).unwrap();
            assert!((re - PI * u / 2.0).abs() < 1e-9 * u, "u={u} re={re}");
            assert_eq!(im, 0.0);
        }
    }

    #[test]
    fn stable_radial_integral_general_alpha() {
        // ∫ (1 − cos s) s^{-1-α} ds = Γ(1−α) cos(πα/2) / α
        for alpha in [0.3, 0.5, 1.5, 1.9] {
            let r = stable(alpha);
            let (re, _) = r.integrals(1.0, 0.0, f64::INFINITY, 1.0, false).unwrap();
            let g = statrs::function::gamma::gamma(1.0 - alpha) * (PI * alpha / 2.0).cos() / alpha;
            assert!((re - g).abs() < 1e-9 * g.abs(), "alpha={alpha} re={re} exact={g}");
        }
    }

    #[test]
    fn imaginary_part_of_one_sided_cauchy() {
        // ∫ (s·1{s<1} − sin s) s^{-2} ds = γ_E − 1
        let r = stable(1.0);
        let (_, im) = r.integrals(1.0, 0.0, f64::INFINITY, 1.0, true).unwrap();
        let euler = 0.577_215_664_901_532_9;
        assert!((im - (euler - 1.0)).abs() < 1e-9, "im={im}");
    }

    #[test]
    fn tempered_moment_matches_gamma() {
        let k = Kernel::Tempered { alpha: 0.5, rate: 1.0 };
        let m = k.moment(4.0, 0.0, f64::INFINITY).unwrap();
        let exact = statrs::function::gamma::gamma(3.5);
        assert!((m - exact).abs() < 1e-10 * exact);
        let inner = k.moment(4.0, 0.0, 1.0).unwrap();
        let outer = k.moment(4.0, 1.0, f64::INFINITY).unwrap();
        assert!((inner + outer - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn tempered_symbol_closed_form() {
        // ∫ (1 − cos su) s^{-1-α} e^{-cs} ds = Γ(−α)[c^α − Re (c − iu)^α]
        let alpha: f64 = 0.5;
        let c = 2.0;
        let r = Radial::new(vec![Piece {
            start: 0.0,
            end: f64::INFINITY,
            kernel: Kernel::Tempered { alpha, rate: c },
        }]);
        let g = statrs::function::gamma::gamma(-alpha);
        for u in [0.01, 1.0, 30.0, 1e4] {
            let exact = g * (c.powf(alpha) - Complex64::new(c, -u).powf(alpha).re);
            let (re, _) = r.integrals(u, 0.0, f64::INFINITY, 1.0, false).unwrap();
            assert!((re - exact).abs() < 1e-9 * exact, "u={u} re={re} exact={exact}");
        }
    }

    #[test]
    fn divergent_moments_are_reported() {
        let r = stable(0.5);
        assert!(matches!(r.moment(2.0, 1.0, f64::INFINITY), Err(LevyError::DivergentMoment(_))));
        assert!(matches!(r.moment(0.2, 0.0, 1.0), Err(LevyError::DivergentMoment(_))));
    }

    #[test]
    fn lamperti_matches_direct_quadrature() {
        let k = Kernel::Lamperti { alpha: 0.7, f: 0.5 };
        let r = Radial::new(vec![Piece { start: 0.0, end: f64::INFINITY, kernel: k }]);
        let u = 3.0;
        let (re, _) = r.integrals(u, 0.0, f64::INFINITY, 1.0, false).unwrap();
        let q = Quad::new(1e-12);
        let direct = q
            .integrate_points(
                |s: f64| {
                    if s == 0.0 {
                        0.0
                    } else {
                        (1.0 - (s * u).cos()) * k.value(s)
                    }
                },
                &[0.0, 1e-3, 0.1, 1.0, 10.0, 60.0],
            )
            .unwrap()
            .value;
        assert!((re - direct).abs() < 1e-8 * direct, "{re} vs {direct}");
    }
}
