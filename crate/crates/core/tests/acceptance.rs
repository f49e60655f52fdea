//! The acceptance suite. Each test prints one `PASS`/`FAIL` line (visible
//! with `--nocapture`) and fails when its criterion is not met.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use levylab::density::{
    density, envelope_check, integral_condition, psi_factor_at, rescaled_density, GridSpec,
};
use levylab::mc::{empirical_tv_lower, ks_against_grid, sample_increments, SamplerConfig};
use levylab::rates::{
    factorization_gap, grad_norm, grad_sweep, log_times, profile_for, rate_fit, tv_distance, tv_sweep, GridOverride,
    Quantity, RateLaw, RateSeries,
};
use levylab::symbol::{
    eval_symbol, levy_moment, Atom, BernsteinSpec, ExplicitSymbol, LevyModel, PhiProfile, Region, SpectralMeasure,
    SymbolSource,
};

fn verdict(id: u32, name: &str, passed: bool, detail: String) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{tag}] {name}: {detail}");
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

fn explicit_power(alpha: f64) -> LevyModel {
    LevyModel::explicit(1, ExplicitSymbol::power(alpha, 1.0).unwrap()).unwrap()
}

fn polar(family: &str, weight: f64, params: &[(&str, f64)]) -> LevyModel {
    LevyModel::polar_named(SpectralMeasure::symmetric_axes(1, weight).unwrap(), family, params).unwrap()
}

/// Symmetric stable on the line with unit atoms at ±1.
fn stable(alpha: f64) -> LevyModel {
    polar("stable", 1.0, &[("alpha", alpha)])
}

/// Symmetric stable scaled to Φ(ξ) = |ξ|.
fn polar_cauchy() -> LevyModel {
    polar("stable", 1.0 / PI, &[("alpha", 1.0)])
}

fn layered() -> LevyModel {
    polar("layered", 1.0, &[("alpha", 0.5), ("beta", 3.0), ("r0", 1.0)])
}

fn series(q: Quantity, pts: Vec<(f64, f64)>) -> RateSeries {
    RateSeries::new(q, pts).unwrap()
}

#[test]
fn criterion_01_cauchy_density() {
    let m = explicit_power(1.0);
    let start = Instant::now();
    let grid = GridSpec::new(1, 1 << 18, 200.0).unwrap();
    let dg = density(&SymbolSource::full(&m), 1.0, &grid, [0, 0]).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let err = dg
        .values
        .iter()
        .enumerate()
        .filter(|(j, _)| grid.y(*j).abs() <= 20.0)
        .map(|(j, v)| (v - 1.0 / (PI * (1.0 + grid.y(j).powi(2)))).abs())
        .fold(0.0, f64::max);
    verdict(
        1,
        "Cauchy density oracle",
        err <= 1e-6 && elapsed < 2.0,
        format!("max error {err:.3e} (≤ 1e-6), runtime {elapsed:.3} s (< 2 s)"),
    );
}

#[test]
fn criterion_02_gaussian_density() {
    let m = explicit_power(2.0);
    let grid = GridSpec::new(1, 1 << 14, 50.0).unwrap();
    let dg = density(&SymbolSource::full(&m), 1.0, &grid, [0, 0]).unwrap();
    let err = dg
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let y = grid.y(j);
            (v - (-y * y / 4.0).exp() / (4.0 * PI).sqrt()).abs()
        })
        .fold(0.0, f64::max);
    verdict(2, "Gaussian density oracle", err <= 1e-8, format!("max error {err:.3e} (≤ 1e-8)"));
}

#[test]
fn criterion_03_cauchy_tv() {
    let m = explicit_power(1.0);
    let profile = PhiProfile::covering(&m, 0.1, 10.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for t in [0.5, 1.0, 2.0, 5.0] {
        let grid = GridSpec::auto(1, t, &profile).unwrap();
        let dg = density(&SymbolSource::full(&m), t, &grid, [0, 0]).unwrap();
        let tv = tv_distance(&dg, &[2.0]).unwrap();
        let exact = 2.0 / PI * (1.0 / t).atan();
        worst = worst.max((tv - exact).abs());
        parts.push(format!("t={t}: {tv:.6}"));
    }
    verdict(3, "Cauchy TV closed form", worst <= 1e-4, format!("{}; max deviation {worst:.2e} (≤ 1e-4)", parts.join(", ")));
}

#[test]
fn criterion_04_stable_tv_rate() {
    let start = Instant::now();
    let ts = log_times(10.0, 1e4, 24);
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.5, 1.0, 1.5] {
        let pts = tv_sweep(&stable(alpha), &ts, &[1.0], GridOverride::default()).unwrap();
        let fit = rate_fit(&series(Quantity::Tv, pts), &RateLaw::PowerLaw { exponent: -1.0 / alpha }).unwrap();
        ok &= (fit.slope + 1.0 / alpha).abs() <= 0.05 && fit.ratio_stats.drift < 0.05;
        parts.push(format!("α={alpha}: slope {:.4} drift {:.2e}", fit.slope, fit.ratio_stats.drift));
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        4,
        "stable TV rate",
        ok && elapsed < 120.0,
        format!("{}; runtime {elapsed:.1} s (< 120 s)", parts.join(", ")),
    );
}

#[test]
fn criterion_05_stable_gradient_scaling() {
    let ts = [1e-3, 1e-1, 10.0, 1e3];
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 1.5] {
        let m = stable(alpha);
        let mut all = ts.to_vec();
        all.push(1.0);
        all.sort_by(f64::total_cmp);
        let pts = grad_sweep(&m, &all, GridOverride::default()).unwrap();
        let g1 = pts.iter().find(|p| p.0 == 1.0).unwrap().1;
        for &(t, g) in pts.iter().filter(|p| p.0 != 1.0) {
            worst = worst.max((g / (t.powf(-1.0 / alpha) * g1) - 1.0).abs());
        }
    }
    let m = polar_cauchy();
    let profile = profile_for(&m, &[1.0]).unwrap();
    let grid = GridSpec::auto(1, 1.0, &profile).unwrap();
    let g = grad_norm(&SymbolSource::full(&m), 1.0, &grid).unwrap();
    let dev = (g - 2.0 / PI).abs();
    verdict(
        5,
        "stable gradient scaling",
        worst <= 1e-4 && dev <= 1e-5,
        format!("max relative scaling deviation {worst:.2e} (≤ 1e-4); Cauchy grad_norm(1) = {g:.7} (2/π ± 1e-5)"),
    );
}

#[test]
fn criterion_06_subordinate_rates() {
    let spec = BernsteinSpec::new(1.0, 0.5).unwrap();
    let m = LevyModel::subordinate_bm(1, spec).unwrap();
    let large = log_times(10.0, 1e4, 24);
    let pts = tv_sweep(&m, &large, &[1.0], GridOverride::default()).unwrap();
    let fit = rate_fit(&series(Quantity::Tv, pts), &RateLaw::PowerLaw { exponent: -1.0 / 1.5 }).unwrap();
    let small = log_times(1e-4, 1e-1, 24);
    let pts = grad_sweep(&m, &small, GridOverride::default()).unwrap();
    let gfit = rate_fit(&series(Quantity::Grad, pts), &RateLaw::LogCorrectedPower { alpha: 1.0, beta: 0.5 }).unwrap();
    let per_decade = gfit.ratio_stats.drift_per_decade;
    verdict(
        6,
        "subordinate Brownian motion rates",
        (fit.slope + 2.0 / 3.0).abs() <= 0.07 && per_decade < 0.10,
        format!(
            "large-t TV slope {:.4} (−0.667 ± 0.07); small-t grad drift per decade {:.2}% (< 10%)",
            fit.slope,
            100.0 * per_decade
        ),
    );
}

#[test]
fn criterion_07_layered_rates() {
    let m = layered();
    let small = log_times(1e-4, 1e-1, 24);
    let g_small = rate_fit(
        &series(Quantity::Grad, grad_sweep(&m, &small, GridOverride::default()).unwrap()),
        &RateLaw::PowerLaw { exponent: -2.0 },
    )
    .unwrap();
    let large = log_times(10.0, 1e4, 24);
    let law = RateLaw::PowerLaw { exponent: -0.5 };
    let tv_large = rate_fit(&series(Quantity::Tv, tv_sweep(&m, &large, &[1.0], GridOverride::default()).unwrap()), &law)
        .unwrap();
    let g_large =
        rate_fit(&series(Quantity::Grad, grad_sweep(&m, &large, GridOverride::default()).unwrap()), &law).unwrap();
    verdict(
        7,
        "layered stable rates",
        (g_small.slope + 2.0).abs() <= 0.1 && (tv_large.slope + 0.5).abs() <= 0.05 && (g_large.slope + 0.5).abs() <= 0.05,
        format!(
            "small-t grad slope {:.4} (−2 ± 0.1); large-t TV slope {:.4}, grad slope {:.4} (−0.5 ± 0.05)",
            g_small.slope, tv_large.slope, g_large.slope
        ),
    );
}

#[test]
fn criterion_08_integral_condition() {
    let ts = log_times(1e-2, 1e4, 7);
    let mut spread: f64 = 0.0;
    let mut ratio_one = 0.0;
    for alpha in [0.5, 1.0, 1.5] {
        let m = explicit_power(alpha);
        let profile = profile_for(&m, &ts).unwrap();
        let r: Vec<f64> = ts.iter().map(|&t| integral_condition(&m, t, 3, &profile).unwrap().bound_ratio).collect();
        let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), v| (a.min(*v), b.max(*v)));
        spread = spread.max(hi / lo - 1.0);
        if alpha == 1.0 {
            ratio_one = r[3];
        }
    }
    let m = layered();
    let lt = log_times(10.0, 1e4, 10);
    let profile = profile_for(&m, &lt).unwrap();
    let r: Vec<f64> = lt.iter().map(|&t| integral_condition(&m, t, 3, &profile).unwrap().bound_ratio).collect();
    let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), v| (a.min(*v), b.max(*v)));
    verdict(
        8,
        "integral condition",
        spread <= 1e-3 && (ratio_one - 12.0).abs() <= 1e-6 && hi / lo <= 3.0,
        format!(
            "power-law ratio spread {spread:.2e} (≤ 1e-3); α=1 ratio {ratio_one:.9} (12 ± 1e-6); layered max/min {:.3} (≤ 3)",
            hi / lo
        ),
    );
}

#[test]
fn criterion_09_envelopes() {
    let ts = [10.0, 1e2, 1e3, 1e4];
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.5, 1.0, 1.5] {
        let m = stable(alpha);
        let profile = profile_for(&m, &ts).unwrap();
        let grid = GridSpec::new(1, 1 << 14, 40.0).unwrap();
        let sups: Vec<f64> = ts
            .iter()
            .map(|&t| envelope_check(&rescaled_density(&m, t, &profile, &grid).unwrap(), 2).unwrap().sup_value)
            .collect();
        let mut sorted = sups.clone();
        sorted.sort_by(f64::total_cmp);
        let median = 0.5 * (sorted[1] + sorted[2]);
        let within = sups.iter().all(|s| *s <= 2.0 * median && *s >= 0.5 * median);
        ok &= within;
        parts.push(format!("α={alpha}: sup (1+|y|)²g_t ∈ [{:.4}, {:.4}]", sorted[0], sorted[3]));
    }
    // Derivative envelopes of the truncated laws against ψ at time t.
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 1.5] {
        let m = stable(alpha);
        let profile = profile_for(&m, &ts).unwrap();
        for &t in &ts {
            let h = profile.h_of_t(t).unwrap();
            let src = SymbolSource::truncated(&m, h);
            let grid = GridSpec::new(1, 1 << 14, 40.0 * h).unwrap();
            for beta in [0u32, 1] {
                let dg = density(&src, t, &grid, [beta, 0]).unwrap();
                for n in 0..=2u32 {
                    let env = envelope_check(&dg, n).unwrap().sup_value;
                    let psi = psi_factor_at(&src, t, n, beta).unwrap();
                    worst = worst.max(env / (10.0 * psi));
                }
            }
        }
    }
    ok &= worst <= 1.0;
    verdict(
        9,
        "rescaled envelopes and ψ bounds",
        ok,
        format!("{}; max |∂p|(1+|y|)^n / (10ψ) = {worst:.3e} (≤ 1)", parts.join(", ")),
    );
}

#[test]
fn criterion_10_symbol_derivative_bounds() {
    let asym = |family: &str, params: &[(&str, f64)]| {
        LevyModel::polar_named(
            SpectralMeasure::atoms(1, vec![
                Atom { direction: [1.0, 0.0], weight: 1.0 },
                Atom { direction: [-1.0, 0.0], weight: 0.3 },
            ])
            .unwrap(),
            family,
            params,
        )
        .unwrap()
        .with_center(false)
    };
    let models = [
        polar("truncated", 1.0, &[("alpha", 0.5), ("r0", 1.0)]),
        polar("truncated", 1.0, &[("alpha", 1.5), ("r0", 2.0)]),
        asym("truncated", &[("alpha", 1.2), ("r0", 1.5)]),
        polar("tempered", 1.0, &[("alpha", 0.7), ("c", 1.0)]),
        asym("tempered", &[("alpha", 1.5), ("c", 2.0)]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0;
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for m in &models {
        let m2 = levy_moment(m, 2.0, Region::All).unwrap();
        let phi = |x: f64| eval_symbol(m, &[x]).unwrap();
        for _ in 0..50 {
            let mag = 10f64.powf(rng.random_range(-1.5..1.3));
            let xi = if rng.random::<bool>() { mag } else { -mag };
            let h = 1e-2;
            let (a, b, c) = (phi(xi - h), phi(xi), phi(xi + h));
            let d1 = ((c - a) / (2.0 * h)).norm();
            let d2 = ((c - 2.0 * b + a) / (h * h)).norm();
            let r1 = d1 / ((1.0 + xi.abs()) * m2);
            let r2 = d2 / m2;
            worst = worst.max(r1).max(r2);
            if r1 > 1.0 + 1e-6 || r2 > 1.0 + 1e-6 {
                violations += 1;
            }
            checked += 1;
        }
    }
    verdict(
        10,
        "symbol derivative bounds",
        violations == 0,
        format!("{violations} violations over {checked} points; largest ratio to bound {worst:.4}"),
    );
}

#[test]
fn criterion_11_factorization() {
    let models = [
        ("stable α=1", stable(1.0)),
        ("layered", layered()),
        ("tempered α=1.3", polar("tempered", 1.0, &[("alpha", 1.3), ("c", 0.5)])),
    ];
    let ts = [0.1, 1.0, 10.0, 100.0];
    let mut violations = 0;
    let mut min_gap = f64::INFINITY;
    for (_, m) in &models {
        let profile = profile_for(m, &ts).unwrap();
        for &t in &ts {
            let h = profile.h_of_t(t).unwrap();
            let grid = GridSpec::auto(1, t, &profile).unwrap();
            for shift in [0.5, 1.0, 2.0] {
                let shift = shift * h;
                let g = factorization_gap(m, h, t, &grid, &[shift]).unwrap();
                min_gap = min_gap.min(g.tv_truncated - g.tv_full);
                if !g.holds(2e-4) {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        11,
        "factorization inequality",
        violations == 0,
        format!("{violations} violations over 36 cases; smallest tv_truncated − tv_full {min_gap:.3e}"),
    );
}

#[test]
fn criterion_12_monte_carlo() {
    let start = Instant::now();
    let m = polar_cauchy();
    let cfg = SamplerConfig::new(1.0, 100_000, 2024);
    let a = sample_increments(&m, &cfg).unwrap();
    let b = a.shifted(&[2.0]);
    let tv = empirical_tv_lower(&a, &b, 64).unwrap();
    let grid = GridSpec::new(1, 1 << 18, 200.0).unwrap();
    let dg = density(&SymbolSource::full(&m), 1.0, &grid, [0, 0]).unwrap();
    let ks = ks_against_grid(&a, &dg).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let upper = 0.5 + 3.0 * (64.0f64 / 1e5).sqrt();
    verdict(
        12,
        "Monte Carlo cross-check",
        (0.40..=upper).contains(&tv) && ks.passed && elapsed < 30.0,
        format!(
            "empirical TV {tv:.4} ∈ [0.40, {upper:.4}]; KS {:.4} < {:.4}; runtime {elapsed:.2} s (< 30 s)",
            ks.statistic, ks.critical
        ),
    );
}
