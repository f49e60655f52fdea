//! One function per subcommand. Each writes its report before checking the
//! gates, so a failing run still leaves the evidence on disk.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use levylab::density::{
    self as lattice, envelope_check, integral_condition, psi_factor_at, rescaled_density, symbol_derivative_check,
    write_binary, write_csv, BoundReport, DensityGrid, GridSpec,
};
use levylab::mc::{empirical_tv_lower, ks_against_grid, sample_increments, SamplerConfig};
use levylab::rates::{
    baseline_compare, default_law, grad_sweep, hypothesis_report, profile_for, rate_fit, tv_distance, tv_sweep,
    write_series_csv, FitSummary, GridOverride, Quantity, RateSeries, Regime, MIN_FIT_DECADES, MIN_FIT_POINTS,
};
use levylab::symbol::{load_model, model_to_value, registry, LevyModel, ModelKind, SymbolSource, DIRECTION_MARGIN};
use levylab::LevyError;

use crate::args::{McArgs, RunArgs, TGrid, Tolerances};
use crate::error::CliError;
use crate::report::{check_gates, create, ensure_dir, envelope, write_json, Gate, SCHEMA_VERSION};

/// Lattice for the rescaled densities, in units of h(t).
const RESCALED_N: [usize; 2] = [1 << 14, 1 << 9];
const RESCALED_L: f64 = 40.0;
const DERIVATIVE_POINTS: usize = 50;

struct Run {
    model: LevyModel,
    tgrid: TGrid,
    times: Vec<f64>,
    grid: GridOverride,
    out: PathBuf,
    tol: Tolerances,
    config: Value,
}

impl Run {
    fn prepare(a: &RunArgs, default_t: TGrid) -> Result<Self, CliError> {
        let model = load_model(&a.model)?;
        if let Some(d) = a.dim {
            if d != model.dim() {
                return Err(CliError::config("dim", format!("--dim {d} but the model has dimension {}", model.dim())));
            }
        }
        if !a.shift.is_finite() {
            return Err(CliError::config("shift", "must be finite"));
        }
        let tol = Tolerances::parse(&a.tol).map_err(|e| CliError::config("tol", e))?;
        let tgrid = a.t.unwrap_or(default_t);
        let out = ensure_dir(&a.out)?;
        let grid = GridOverride { n: a.n, l: a.l };
        let config = json!({
            "model_path": a.model,
            "model": model_to_value(&model),
            "t": tgrid,
            "grid": grid,
            "shift": a.shift,
            "out": a.out,
            "seed": a.seed,
            "dim": model.dim(),
            "regime": Regime::from(a.regime),
            "direction_margin": DIRECTION_MARGIN,
            "tolerances": tol,
        });
        Ok(Run { times: tgrid.times(), model, tgrid, grid, out, tol, config })
    }

    fn shift(&self, s: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.model.dim()];
        v[0] = s;
        v
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn finish(path: &Path, command: &str, run: &Run, body: Value, gates: &[Gate]) -> Result<(), CliError> {
    write_json(path, &envelope(command, run.config.clone(), body, gates))?;
    check_gates(gates)
}

pub fn catalog(out: Option<&Path>) -> Result<(), CliError> {
    let families: Vec<Value> = registry()
        .entries()
        .map(|e| {
            let params: Vec<Value> = e
                .params
                .iter()
                .map(|p| json!({"name": p.name, "range": p.range, "default": p.default}))
                .collect();
            json!({"name": e.name, "density": e.density, "params": params})
        })
        .collect();
    let doc = json!({"schema_version": SCHEMA_VERSION, "families": families});
    println!("{}", serde_json::to_string_pretty(&doc).expect("catalog serializes"));
    if let Some(dir) = out {
        write_json(&ensure_dir(dir)?.join("catalog.json"), &doc)?;
    }
    Ok(())
}

pub fn density(a: &RunArgs) -> Result<(), CliError> {
    let run = Run::prepare(a, TGrid::single(1.0))?;
    let profile = profile_for(&run.model, &run.times)?;
    let source = SymbolSource::full(&run.model);
    let mut outputs = Vec::new();
    let mut gates = Vec::new();
    for (k, &t) in run.times.iter().enumerate() {
        let grid = run.grid.resolve(run.model.dim(), t, &profile)?;
        let dg = lattice::density(&source, t, &grid, [0, 0])?;
        let stem = format!("density_{k:03}");
        let mut files = Vec::new();
        if grid.dim == 1 {
            let path = run.path(&format!("{stem}.csv"));
            let mut w = create(&path)?;
            write_csv(&dg, &mut w)?;
            w.flush().map_err(|e| CliError::io(&path, e))?;
            files.push(path);
        }
        let bin = run.path(&format!("{stem}.bin"));
        let side = write_binary(&dg, &bin)?;
        files.extend([bin, side]);

        let mass = dg.diagnostics.mass.unwrap_or(f64::NAN);
        gates.push(Gate::new("mass", (mass - 1.0).abs() <= run.tol.mass, format!("t = {t}: lattice mass {mass:.9}")));
        if run.model.is_symmetric() {
            let limit = run.tol.imag * dg.max_abs();
            let r = dg.diagnostics.imag_residual;
            gates.push(Gate::new("imag-residual", r < limit, format!("t = {t}: |Im| = {r:.3e}, limit {limit:.3e}")));
        }
        outputs.push(json!({
            "t": t,
            "grid": grid,
            "files": files.iter().map(|f| f.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
            "meta": dg.meta,
            "diagnostics": dg.diagnostics,
        }));
    }
    finish(&run.path("density.json"), "density", &run, json!({ "outputs": outputs }), &gates)
}

pub fn rate(a: &RunArgs, quantity: Quantity) -> Result<(), CliError> {
    let regime = Regime::from(a.regime);
    let run = Run::prepare(a, TGrid::window(regime, 24))?;
    let TGrid { min, max, points, .. } = run.tgrid;
    if points < MIN_FIT_POINTS || (max / min).log10() < MIN_FIT_DECADES {
        return Err(CliError::config(
            "t",
            format!("a rate fit needs at least {MIN_FIT_POINTS} points over {MIN_FIT_DECADES} decades"),
        ));
    }
    let law = default_law(&run.model, regime)?;
    law.check_on(min, max)?;

    let points = match quantity {
        Quantity::Tv => tv_sweep(&run.model, &run.times, &run.shift(a.shift), run.grid)?,
        Quantity::Grad => grad_sweep(&run.model, &run.times, run.grid)?,
    };
    let series = RateSeries::new(quantity, points)?;
    let fit = rate_fit(&series, &law)?;
    let summary = FitSummary::new(&fit, law, regime, hypothesis_report(&law, regime));
    let baseline_gap = if quantity == Quantity::Tv { a.shift } else { 0.0 };
    let baseline = baseline_compare(&series, baseline_gap);

    let profile = profile_for(&run.model, &run.times)?;
    let grids = run
        .times
        .iter()
        .map(|&t| Ok(json!({"t": t, "grid": run.grid.resolve(run.model.dim(), t, &profile)?})))
        .collect::<Result<Vec<_>, LevyError>>()?;

    let csv = run.path(&format!("{}_series.csv", quantity.name()));
    let mut w = create(&csv)?;
    write_series_csv(&series, &law, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(&csv, e))?;

    let mut gates = vec![Gate::new(
        "fit-finite",
        fit.slope.is_finite() && fit.stderr.is_finite(),
        format!("slope {} ± {}", fit.slope, fit.stderr),
    )];
    let violation = series.monotonicity_violation(run.tol.monotone);
    gates.push(Gate::new(
        "series-monotone",
        violation.is_none(),
        match violation {
            Some((t, v)) => format!("{} rises to {v:e} at t = {t}", quantity.name()),
            None => format!("{} non-increasing within {}", quantity.name(), run.tol.monotone),
        },
    ));
    let body = json!({
        "fit_summary": summary,
        "rate_fit": fit,
        "hypothesis_report": summary.hypothesis_report,
        "baseline_compare": baseline,
        "series": series,
        "t_window": fit.t_window,
        "direction_margin": DIRECTION_MARGIN,
        "grids": grids,
        "assumptions": ["the decay profile is taken to be differentiable near zero; a tabulated profile cannot certify this"],
    });
    finish(&run.path(&format!("{}_fit.json", quantity.name())), quantity.name(), &run, body, &gates)
}

fn median(xs: &[f64]) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn skipped(e: &LevyError) -> Value {
    json!({"skipped": e.code(), "reason": e.to_string()})
}

/// `sup |∂^β p^h_t|(1+|y|)^n / ψ_t` for the truncated law at h(t), over
/// β ∈ {0, e₁} and n ≤ d + 1.
fn psi_envelope_ratio(model: &LevyModel, t: f64, h: f64, n_max: u32) -> Result<(f64, f64), LevyError> {
    let dim = model.dim();
    let src = SymbolSource::truncated(model, h);
    let grid = GridSpec::new(dim, RESCALED_N[dim - 1], RESCALED_L * h)?;
    let mut worst: f64 = 0.0;
    let mut psi_top = 0.0;
    for beta in [0u32, 1] {
        let dg = lattice::density(&src, t, &grid, [beta, 0])?;
        for n in 0..=n_max {
            let env = envelope_check(&dg, n)?.sup_value;
            let psi = psi_factor_at(&src, t, n, beta)?;
            if beta == 0 && n == n_max {
                psi_top = psi;
            }
            worst = worst.max(env / psi);
        }
    }
    Ok((worst, psi_top))
}

pub fn verify_bounds(a: &RunArgs) -> Result<(), CliError> {
    let regime = Regime::from(a.regime);
    let run = Run::prepare(a, TGrid::window(regime, 7))?;
    let model = &run.model;
    let dim = model.dim();
    let d = dim as u32;
    let profile = profile_for(model, &run.times)?;
    let mut gates = Vec::new();

    // ∫ e^{−tReΦ}|ξ|^m against φ⁻¹(1/t)^{m+d}.
    let m = d + 2;
    let integral: Vec<(f64, f64)> = run
        .times
        .iter()
        .map(|&t| Ok((t, integral_condition(model, t, m, &profile)?.bound_ratio)))
        .collect::<Result<_, LevyError>>()?;
    let ratios: Vec<f64> = integral.iter().map(|p| p.1).collect();
    let psi_integral = psi_factor_at(&SymbolSource::full(model), run.tgrid.min, 0, m)?;
    let slack = run.tol.integral;
    let integral_report = BoundReport::from_sweep(0, m, psi_integral, &integral, median(&ratios), slack);
    let lowest = integral_report.ratio_series.iter().fold(f64::INFINITY, |l, r| l.min(r.1));
    gates.push(Gate::new(
        "integral-condition-bounded",
        integral_report.bounded && lowest >= 1.0 / slack,
        format!("ratio/median in [{lowest:.4}, {:.4}], allowed factor {slack}", integral_report.observed_max),
    ));

    // Envelopes of h^d p^h_t(h·) and ψ bounds on the truncated laws.
    let n = d + 1;
    let rescaled_grid = GridSpec::new(dim, a.n.unwrap_or(RESCALED_N[dim - 1]), a.l.unwrap_or(RESCALED_L))?;
    let envelopes: Result<Vec<(f64, f64)>, LevyError> = run
        .times
        .iter()
        .map(|&t| Ok((t, envelope_check(&rescaled_density(model, t, &profile, &rescaled_grid)?, n)?.sup_value)))
        .collect();
    let envelope_section = match envelopes {
        Ok(env) => {
            let sups: Vec<f64> = env.iter().map(|p| p.1).collect();
            let mut psi_max: f64 = 0.0;
            let psi_section = if matches!(model.kind(), ModelKind::Polar { .. }) {
                let mut worst: f64 = 0.0;
                for &t in &run.times {
                    let (w, psi) = psi_envelope_ratio(model, t, profile.h_of_t(t)?, n)?;
                    worst = worst.max(w);
                    psi_max = psi_max.max(psi);
                }
                let limit = run.tol.psi;
                gates.push(Gate::new(
                    "psi-envelope",
                    worst <= limit,
                    format!("max sup|∂p|(1+|y|)^n / ψ = {worst:.4e}, allowed {limit}"),
                ));
                json!({"max_ratio_to_psi": worst, "allowed": limit})
            } else {
                json!({"skipped": "explicit-symbol", "reason": "ψ needs a Lévy measure"})
            };
            let slack = run.tol.envelope;
            let report = BoundReport::from_sweep(n, 0, psi_max, &env, median(&sups), slack);
            let lowest = report.ratio_series.iter().fold(f64::INFINITY, |l, r| l.min(r.1));
            gates.push(Gate::new(
                "envelope-bounded",
                report.bounded && lowest >= 1.0 / slack,
                format!("sup/median in [{lowest:.4}, {:.4}], allowed factor {slack}", report.observed_max),
            ));
            json!({"grid": rescaled_grid, "report": report, "psi_check": psi_section})
        }
        Err(e @ LevyError::NoLevyMeasure(_)) => skipped(&e),
        Err(e) => return Err(e.into()),
    };

    let derivative = match symbol_derivative_check(model, DERIVATIVE_POINTS, a.seed) {
        Ok(r) => {
            gates.push(Gate::new(
                "symbol-derivative-bounds",
                r.violations == 0,
                format!("{} of {} points violate, worst ratio {:.6}", r.violations, r.checked, r.worst_ratio),
            ));
            json!(r)
        }
        Err(e @ (LevyError::DivergentMoment(_) | LevyError::NoLevyMeasure(_) | LevyError::InvalidModel(_))) => {
            skipped(&e)
        }
        Err(e) => return Err(e.into()),
    };

    let finite = integral_report.psi_factor.is_finite() && integral_report.observed_max.is_finite();
    gates.push(Gate::new("bound-report-finite", finite, "ψ and ratios finite"));
    let body = json!({
        "integral_condition": {"series": integral, "report": integral_report},
        "envelope": envelope_section,
        "symbol_derivative": derivative,
        "t_window": [run.tgrid.min, run.tgrid.max],
        "direction_margin": DIRECTION_MARGIN,
    });
    finish(&run.path("bounds.json"), "verify-bounds", &run, body, &gates)
}

pub fn mc_check(a: &McArgs) -> Result<(), CliError> {
    let mut run = Run::prepare(&a.run, TGrid::single(1.0))?;
    if let Value::Object(map) = &mut run.config {
        map.insert("paths".into(), json!(a.paths));
        map.insert("epsilon".into(), json!(a.epsilon));
        map.insert("cells".into(), json!(a.cells));
    }
    let shift = run.shift(a.run.shift);
    let profile = profile_for(&run.model, &run.times)?;
    let mut gates = Vec::new();
    let mut checks = Vec::new();
    for &t in &run.times {
        let cfg = SamplerConfig::new(t, a.paths, a.run.seed).with_epsilon(a.epsilon);
        let samples = sample_increments(&run.model, &cfg)?;
        let moved = samples.shifted(&shift);
        let empirical = empirical_tv_lower(&samples, &moved, a.cells)?;
        let grid = run.grid.resolve(run.model.dim(), t, &profile)?;
        let dg: DensityGrid = lattice::density(&SymbolSource::full(&run.model), t, &grid, [0, 0])?;
        let lattice = tv_distance(&dg, &shift)?;
        let noise = run.tol.mc_noise * (a.cells as f64 / a.paths as f64).sqrt();
        gates.push(Gate::new(
            "mc-tv-lower-bound",
            empirical <= lattice + noise,
            format!("t = {t}: empirical {empirical:.5} vs lattice {lattice:.5} + {noise:.5}"),
        ));
        let ks = if dg.grid.dim == 1 {
            let ks = ks_against_grid(&samples, &dg)?;
            gates.push(Gate::new(
                "mc-ks",
                ks.passed,
                format!("t = {t}: D = {:.5}, critical {:.5}", ks.statistic, ks.critical),
            ));
            Some(ks)
        } else {
            None
        };
        checks.push(json!({
            "t": t,
            "grid": grid,
            "sampler": cfg,
            "empirical_tv_lower": empirical,
            "lattice_tv": lattice,
            "noise_allowance": noise,
            "ks": ks,
            "directional_bias_flag": samples.directional_bias_flag,
        }));
    }
    finish(&run.path("mc_check.json"), "mc-check", &run, json!({ "checks": checks }), &gates)
}
