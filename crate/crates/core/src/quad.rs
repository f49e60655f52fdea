//! Adaptive Gauss–Kronrod (G10/K21) quadrature, generic over real and
//! complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::LevyError;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_453,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Values that can be integrated: reals and complex numbers.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quad {
    fn default() -> Self {
        Quad {
            // Results near the underflow threshold cannot meet a relative
            // tolerance (e.g. tempered tails far beyond the cutoff).
            abs_tol: 1e-250,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut abs = fc.magnitude() * WGK[10];
    let mut g = T::zero();
    for i in 0..10 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        let s = f1 + f2;
        k = k + s * WGK[i];
        abs += (f1.magnitude() + f2.magnitude()) * WGK[i];
        if i % 2 == 1 {
            g = g + s * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    let err = (k - g).magnitude();
    // Differences at round-off level cannot be reduced by bisection.
    if err <= 50.0 * f64::EPSILON * abs * h.abs() {
        (k, 0.0)
    } else {
        (k, err)
    }
}

impl Quad {
    pub fn new(rel_tol: f64) -> Self {
        Quad {
            rel_tol,
            ..Default::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Integrates over `[a, b]`, splitting first at the given interior points.
    pub fn integrate_points<T, F>(&self, mut f: F, points: &[f64]) -> Result<Estimate<T>, LevyError>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        let mut heap = BinaryHeap::new();
        let mut total = T::zero();
        let mut total_err = 0.0;
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let (v, e) = kronrod(&mut f, a, b);
            total = total + v;
            total_err += e;
            heap.push(Panel { a, b, value: v, error: e });
        }
        let mut count = heap.len();
        loop {
            let tol = self.abs_tol.max(self.rel_tol * total.magnitude());
            if total_err <= tol || !total_err.is_finite() {
                break;
            }
            if count >= self.max_intervals {
                return Err(LevyError::SymbolQuadratureFailed {
                    error_estimate: total_err,
                });
            }
            let Some(p) = heap.pop() else { break };
            let m = 0.5 * (p.a + p.b);
            if !(m > p.a && m < p.b) {
                // Interval can no longer be bisected in floating point.
                return Err(LevyError::SymbolQuadratureFailed {
                    error_estimate: total_err,
                });
            }
            let (v1, e1) = kronrod(&mut f, p.a, m);
            let (v2, e2) = kronrod(&mut f, m, p.b);
            total = total - p.value + v1 + v2;
            total_err += e1 + e2 - p.error;
            heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
            heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
            count += 1;
        }
        if !total_err.is_finite() || !total.magnitude().is_finite() {
            return Err(LevyError::SymbolQuadratureFailed {
                error_estimate: f64::INFINITY,
            });
        }
        // Recompute the sum from the panels to shed accumulated cancellation.
        let mut value = T::zero();
        let mut error = 0.0;
        for p in heap.into_vec() {
            value = value + p.value;
            error += p.error;
        }
        Ok(Estimate { value, error })
    }

    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64) -> Result<Estimate<T>, LevyError>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        self.integrate_points(f, &[a, b])
    }

    /// Integrates over `[a, ∞)` through `x = a + scale·u/(1−u)`.
    pub fn integrate_to_infinity<T, F>(&self, mut f: F, a: f64, scale: f64) -> Result<Estimate<T>, LevyError>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        let g = |u: f64| {
            if u >= 1.0 {
                return T::zero();
            }
            let d = 1.0 - u;
            let x = a + scale * u / d;
            let v = f(x);
            if v.magnitude() == 0.0 {
                T::zero()
            } else {
                v * (scale / (d * d))
            }
        };
        self.integrate_points(g, &[0.0, 0.5, 0.9, 0.99, 1.0])
    }
}
