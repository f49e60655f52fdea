use std::f64::consts::PI;

use levylab::symbol::{
    decompose_check, eval_residual, eval_symbol, eval_truncated, h_of_t, hw_index, levy_moment, phi_inverse,
    phi_profile, Atom, BernsteinSpec, ExplicitSymbol, LevyModel, Region, SpectralMeasure,
};
use levylab::LevyError;

fn polar(family: &str, weight: f64, params: &[(&str, f64)]) -> LevyModel {
    LevyModel::polar_named(SpectralMeasure::symmetric_axes(1, weight).unwrap(), family, params).unwrap()
}

fn stable(alpha: f64) -> LevyModel {
    polar("stable", 1.0, &[("alpha", alpha)])
}

fn power(alpha: f64) -> LevyModel {
    LevyModel::explicit(1, ExplicitSymbol::power(alpha, 1.0).unwrap()).unwrap()
}

#[test]
fn symbol_values_and_origin() {
    let v = eval_symbol(&stable(1.0), &[1.0]).unwrap();
    assert!((v.re - PI).abs() < 1e-9);
    let sub = LevyModel::subordinate_bm(1, BernsteinSpec::new(1.0, 1.0).unwrap()).unwrap();
    assert!((eval_symbol(&sub, &[1.0]).unwrap().re - 2f64.ln().sqrt()).abs() < 1e-12);
    for m in [stable(0.7), sub, power(1.5), polar("tempered", 1.0, &[("alpha", 1.2), ("c", 1.0)])] {
        assert_eq!(eval_symbol(&m, &[0.0]).unwrap().norm(), 0.0);
    }
}

#[test]
fn split_at_one_matches_independent_quadrature() {
    // 2∫₀¹(1−cos s)s⁻²ds and 2∫₁^∞(1−cos s)s⁻²ds, summing to π.
    let m = stable(1.0);
    let t = eval_truncated(&m, 1.0, &[1.0]).unwrap();
    let r = eval_residual(&m, 1.0, &[1.0]).unwrap();
    assert!((t.re - 0.972_770_752_470_645).abs() < 1e-9);
    assert!((r.re - 2.168_821_901_119_148).abs() < 1e-9);
    assert_eq!(eval_residual(&m, 1.0, &[0.0]).unwrap().norm(), 0.0);
}

#[test]
fn truncation_beyond_support_is_the_full_symbol() {
    let m = polar("truncated", 1.0, &[("alpha", 1.3), ("r0", 2.0)]);
    for xi in [0.3, 1.0, 7.0] {
        let full = eval_symbol(&m, &[xi]).unwrap();
        let trunc = eval_truncated(&m, 3.0, &[xi]).unwrap();
        assert!((full.re - trunc.re).abs() < 1e-8);
        assert!(eval_residual(&m, 3.0, &[xi]).unwrap().re.abs() < 1e-12);
    }
}

#[test]
fn truncated_real_part_shrinks_to_zero() {
    let m = polar("tempered", 1.0, &[("alpha", 0.8), ("c", 1.0)]);
    let mut prev = f64::INFINITY;
    for r in [4.0, 1.0, 0.1, 1e-2, 1e-4] {
        let v = eval_truncated(&m, r, &[2.0]).unwrap().re;
        assert!(v <= prev && v >= 0.0);
        prev = v;
    }
    assert!(prev < 1e-4);
}

#[test]
fn symmetric_measures_have_real_symbols() {
    for m in [stable(0.6), polar("layered", 1.0, &[("alpha", 1.4), ("beta", 0.9), ("r0", 1.0)])] {
        for xi in [-5.0, 0.2, 3.0] {
            assert!(eval_symbol(&m, &[xi]).unwrap().im.abs() < 1e-8);
        }
    }
}

#[test]
fn profiles_of_radial_symbols() {
    let p = phi_profile(&power(1.5), 1e-3, 1e3, 64, 1).unwrap();
    for (&rho, &v) in p.rho().iter().zip(p.values()) {
        assert!((v / rho.powf(1.5) - 1.0).abs() < 1e-12);
    }
    let p = phi_profile(&stable(1.0), 1e-2, 1e2, 32, 1).unwrap();
    for (&rho, &v) in p.rho().iter().zip(p.values()) {
        assert!((v / (PI * rho) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn anisotropic_profile_is_the_axis_maximum() {
    let spectral = SpectralMeasure::atoms(2, vec![
        Atom { direction: [1.0, 0.0], weight: 1.0 },
        Atom { direction: [0.0, 1.0], weight: 0.4 },
    ])
    .unwrap();
    let m = LevyModel::polar_named(spectral, "stable", &[("alpha", 1.2)]).unwrap();
    let p = phi_profile(&m, 0.1, 10.0, 16, 64).unwrap();
    for (&rho, &v) in p.rho().iter().zip(p.values()) {
        let brute = (0..360)
            .map(|k| {
                let a = k as f64 * PI / 180.0;
                eval_symbol(&m, &[rho * a.cos(), rho * a.sin()]).unwrap().re
            })
            .fold(0.0, f64::max);
        assert!(v <= brute * (1.0 + 1e-9) && v >= brute * (1.0 - p.margin()), "{rho}: {v} vs {brute}");
    }
}

#[test]
fn inverses_of_power_profiles() {
    let p = phi_profile(&power(0.8), 1e-4, 1e4, 128, 1).unwrap();
    for s in [1e-2, 0.5, 30.0] {
        assert!((phi_inverse(&p, s).unwrap() / s.powf(1.0 / 0.8) - 1.0).abs() < 1e-6);
    }
    for t in [0.1, 1.0, 10.0] {
        assert!((h_of_t(&p, t).unwrap() / t.powf(1.0 / 0.8) - 1.0).abs() < 1e-6);
    }
    let p = phi_profile(&stable(1.0), 1e-3, 1e3, 64, 1).unwrap();
    assert!((h_of_t(&p, 2.0).unwrap() / (2.0 * PI) - 1.0).abs() < 1e-6);
    assert!(matches!(phi_inverse(&p, 1e9), Err(LevyError::OutOfRange { .. })));
}

#[test]
fn subordinate_inverse_follows_the_log_corrected_asymptote() {
    // For large s, φ(ρ) = ρ(log(1+ρ²))^{1/4} inverts to ≈ g(s) = s(log(1+s))^{−1/4}.
    let m = LevyModel::subordinate_bm(1, BernsteinSpec::new(1.0, 0.5).unwrap()).unwrap();
    let p = phi_profile(&m, 1e-2, 1e5, 128, 1).unwrap();
    let s: f64 = 1e3;
    let g = s * s.ln_1p().powf(-0.25);
    let rho = phi_inverse(&p, s).unwrap();
    assert!((rho / g - 1.0).abs() < 0.15, "{rho} vs {g}");
}

#[test]
fn hw_ratios() {
    let rep = hw_index(&stable(1.0), &[10.0, 100.0, 1e3]).unwrap();
    assert!((rep.ratios[2] - PI * 1e3 / 1001f64.ln()).abs() < 1e-6);
    assert!(rep.hw_infinite_suspected);
    let rep = hw_index(&power(2.0), &[100.0]).unwrap();
    assert!((rep.ratios[0] - 1e4 / 101f64.ln()).abs() < 1e-9);
    let cp = LevyModel::explicit(1, ExplicitSymbol::compound_poisson(1.0, [1.0, 0.0]).unwrap()).unwrap();
    let rep = hw_index(&cp, &[1e2, 1e3, 1e4]).unwrap();
    assert!(rep.ratios[2] < 0.3 && !rep.hw_infinite_suspected, "{rep:?}");
}

#[test]
fn moments() {
    let m = polar("truncated", 1.0, &[("alpha", 0.5), ("r0", 1.0)]);
    assert!((levy_moment(&m, 2.0, Region::Inner(1.0)).unwrap() - 4.0 / 3.0).abs() < 1e-10);
    assert_eq!(levy_moment(&m, 3.0, Region::Outer(1.0)).unwrap(), 0.0);
    // 2∫ s^{3−α} e^{−s} ds = 2Γ(3.5).
    let t = polar("tempered", 1.0, &[("alpha", 0.5), ("c", 1.0)]);
    assert!((levy_moment(&t, 4.0, Region::All).unwrap() - 6.646_701_940_895_685).abs() < 1e-8);
    assert!(matches!(levy_moment(&stable(1.2), 2.0, Region::All), Err(LevyError::DivergentMoment(_))));
}

#[test]
fn decompositions() {
    let layered = polar("layered", 1.0, &[("alpha", 0.7), ("beta", 2.5), ("r0", 1.0)]);
    let own = decompose_check(&layered, &layered).unwrap();
    assert!(own.valid && own.min_gap == 0.0);
    let minorant = polar("truncated", 1.0, &[("alpha", 0.7), ("r0", 1.0)]);
    assert!(decompose_check(&layered, &minorant).unwrap().valid);
    let heavier = polar("stable", 2.0, &[("alpha", 0.7)]);
    let rep = decompose_check(&stable(0.7), &heavier).unwrap();
    assert!(!rep.valid && rep.min_gap < 0.0);
}
