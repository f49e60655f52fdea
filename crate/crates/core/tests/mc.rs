use std::f64::consts::PI;
use std::time::Instant;

use levylab::density::{density, GridSpec};
use levylab::mc::*;
use levylab::rates::tv_distance;
use levylab::symbol::{LevyModel, SpectralMeasure, SymbolSource};

fn cauchy() -> LevyModel {
    LevyModel::polar_named(SpectralMeasure::symmetric_axes(1, 1.0 / PI).unwrap(), "stable", &[("alpha", 1.0)]).unwrap()
}

#[test]
fn cauchy_samples_match_arctan_cdf_and_tv() {
    let start = Instant::now();
    let m = cauchy();
    let cfg = SamplerConfig::new(1.0, 100_000, 7);
    let a = sample_increments(&m, &cfg).unwrap();
    let ks = ks_statistic(&a, |x| 0.5 + x.atan() / PI);
    println!("ks {:?} after {:?}", ks, start.elapsed());
    assert!(ks.passed);
    let b = a.shifted(&[2.0]);
    let tv = empirical_tv_lower(&a, &b, 64).unwrap();
    println!("tv {tv}");
    assert!(tv >= 0.40 && tv <= 0.5 + 3.0 * (64.0f64 / 1e5).sqrt());
    assert_eq!(empirical_tv_lower(&a, &a, 64).unwrap(), 0.0);
    let g = GridSpec::new(1, 1 << 18, 200.0).unwrap();
    let dg = density(&SymbolSource::full(&m), 1.0, &g, [0, 0]).unwrap();
    let ksg = ks_against_grid(&a, &dg).unwrap();
    println!("ks grid {ksg:?}");
    assert!(ksg.passed);
    assert!(tv <= tv_distance(&dg, &[2.0]).unwrap() + 3.0 * (64.0f64 / 1e5).sqrt());
    // A narrow window leaves 1/(40π) outside; the tail model accounts for it.
    let narrow = density(&SymbolSource::full(&m), 1.0, &GridSpec::new(1, 1 << 14, 40.0).unwrap(), [0, 0]).unwrap();
    assert!(ks_against_grid(&a, &narrow).unwrap().passed);
    println!("elapsed {:?}", start.elapsed());
}

#[test]
fn determinism_and_truncated_surrogate() {
    let m = cauchy();
    let cfg = SamplerConfig::new(1.0, 2000, 11).with_epsilon(0.1);
    let a = sample_increments(&m, &cfg).unwrap();
    let b = sample_increments(&m, &cfg).unwrap();
    assert_eq!(a.to_le_bytes(), b.to_le_bytes());
    let tr = LevyModel::polar_named(SpectralMeasure::symmetric_axes(1, 1.0).unwrap(), "truncated", &[("alpha", 0.5), ("r0", 1.0)])
        .unwrap();
    let cfg = SamplerConfig::new(1.0, 5000, 3).with_epsilon(1.0);
    let s = sample_increments(&tr, &cfg).unwrap();
    // Pure Gaussian with variance t·∫s²Q over both atoms: 2·(2/3)·1 = 4/3.
    let var = s.samples.iter().map(|x| x[0] * x[0]).sum::<f64>() / s.len() as f64;
    assert!((var - 4.0 / 3.0).abs() < 0.1, "{var}");
}

#[test]
fn halving_epsilon_stays_within_sampling_band() {
    let m = cauchy();
    let g = GridSpec::new(1, 1 << 16, 100.0).unwrap();
    let dg = density(&SymbolSource::full(&m), 1.0, &g, [0, 0]).unwrap();
    let ks = |eps: f64| {
        let cfg = SamplerConfig::new(1.0, 20_000, 5).with_epsilon(eps);
        ks_against_grid(&sample_increments(&m, &cfg).unwrap(), &dg).unwrap()
    };
    let (a, b) = (ks(2e-2), ks(1e-2));
    assert!((a.statistic - b.statistic).abs() < a.critical, "{a:?} {b:?}");
}
