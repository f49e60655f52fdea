use std::f64::consts::PI;

use levylab::density::{density, GridSpec};
use levylab::rates::*;
use levylab::symbol::{BernsteinSpec, ExplicitSymbol, LevyModel, PhiProfile, SpectralMeasure, SymbolSource};

fn explicit_power(alpha: f64) -> LevyModel {
    LevyModel::explicit(1, ExplicitSymbol::power(alpha, 1.0).unwrap()).unwrap()
}

fn stable(alpha: f64) -> LevyModel {
    LevyModel::polar_named(SpectralMeasure::symmetric_axes(1, 1.0).unwrap(), "stable", &[("alpha", alpha)]).unwrap()
}

#[test]
fn cauchy_tv_closed_form() {
    let m = explicit_power(1.0);
    let profile = PhiProfile::covering(&m, 0.1, 10.0).unwrap();
    for t in [0.5, 1.0, 2.0, 5.0] {
        let g = GridSpec::auto(1, t, &profile).unwrap();
        let dg = density(&SymbolSource::full(&m), t, &g, [0, 0]).unwrap();
        let tv = tv_distance(&dg, &[2.0]).unwrap();
        let exact = 2.0 / PI * (1.0 / t).atan();
        assert!((tv - exact).abs() < 1e-4, "t={t} {tv} vs {exact}");
        let back = tv_distance(&dg, &[-2.0]).unwrap();
        assert!((back - tv).abs() < 1e-10, "{back} vs {tv}");
    }
}

#[test]
fn polar_cauchy_tv_and_gaussian_tv() {
    // Atoms ±1 with weight 1/2 give Φ = π/2·|ξ|... scale to |ξ| with weight 1/π.
    let m = LevyModel::polar_named(SpectralMeasure::symmetric_axes(1, 1.0 / PI).unwrap(), "stable", &[("alpha", 1.0)])
        .unwrap();
    let profile = PhiProfile::covering(&m, 0.1, 10.0).unwrap();
    let g = GridSpec::auto(1, 1.0, &profile).unwrap();
    let dg = density(&SymbolSource::full(&m), 1.0, &g, [0, 0]).unwrap();
    let tv = tv_distance(&dg, &[2.0]).unwrap();
    assert!((tv - 0.5).abs() < 1e-4, "{tv}");

    let gm = explicit_power(2.0);
    let g = GridSpec::new(1, 1 << 12, 40.0).unwrap();
    let dg = density(&SymbolSource::full(&gm), 1.0, &g, [0, 0]).unwrap();
    let tv = tv_distance(&dg, &[1.0]).unwrap();
    assert!((tv - 0.276_326_390_168_237).abs() < 1e-5, "{tv}");
    assert_eq!(tv_distance(&dg, &[0.0]).unwrap(), 0.0);
    assert!(matches!(tv_distance(&dg, &[20.0]), Err(levylab::LevyError::ShiftTooLarge { .. })));
}

#[test]
fn grad_norm_closed_forms() {
    let m = explicit_power(1.0);
    let g = GridSpec::new(1, 1 << 18, 200.0).unwrap();
    let v = grad_norm(&SymbolSource::full(&m), 1.0, &g).unwrap();
    assert!((v - 2.0 / PI).abs() < 1e-5, "{v}");
    let gm = explicit_power(2.0);
    let g = GridSpec::new(1, 1 << 12, 40.0).unwrap();
    let v = grad_norm(&SymbolSource::full(&gm), 1.0, &g).unwrap();
    assert!((v - 1.0 / PI.sqrt()).abs() < 1e-8, "{v}");
}

#[test]
fn stable_tv_slope_quick() {
    for alpha in [0.5, 1.0, 1.5] {
        let m = stable(alpha);
        let ts = log_times(10.0, 1e4, 8);
        let pts = tv_sweep(&m, &ts, &[1.0], GridOverride::default()).unwrap();
        let s = RateSeries::new(Quantity::Tv, pts).unwrap();
        let fit = rate_fit(&s, &RateLaw::PowerLaw { exponent: -1.0 / alpha }).unwrap();
        println!("alpha {alpha}: slope {} drift {}", fit.slope, fit.ratio_stats.drift);
        assert!((fit.slope + 1.0 / alpha).abs() < 0.05);
        assert!(fit.ratio_stats.drift < 0.05);
    }
}

#[test]
fn exact_power_fit() {
    let pts: Vec<(f64, f64)> = log_times(1.0, 1e3, 10).into_iter().map(|t| (t, 3.0 / (t * t))).collect();
    let s = RateSeries::new(Quantity::Tv, pts).unwrap();
    let fit = rate_fit(&s, &RateLaw::PowerLaw { exponent: -2.0 }).unwrap();
    assert!((fit.slope + 2.0).abs() < 1e-12);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
    assert!(fit.ratio_stats.drift < 1e-12);
    let short = RateSeries::new(Quantity::Tv, s.points[..5].to_vec()).unwrap();
    assert!(matches!(rate_fit(&short, &RateLaw::PowerLaw { exponent: -2.0 }), Err(levylab::LevyError::InsufficientSpan(_))));
}

#[test]
fn hypothesis_values() {
    let r = hypothesis_report(&RateLaw::PowerLaw { exponent: -2.0 }, Regime::Large);
    assert!((r.doubling_max - 4.0).abs() < 1e-12);
    assert!(r.logtest_min < 1e-4);
    let spec = BernsteinSpec::new(1.0, 1.0).unwrap();
    let r = hypothesis_report(&RateLaw::InverseBernstein { spec, regime: Regime::Large }, Regime::Large);
    println!("{r:?}");
    assert!(r.doubling_max < 4.1);
}
