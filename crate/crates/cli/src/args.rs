use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use levylab::rates::{log_times, Regime};

#[derive(Debug, Parser)]
#[command(name = "levylab", version, about = "Densities, decay rates and Monte Carlo checks for Lévy processes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the radial families and their parameters.
    Catalog {
        /// Also write catalog.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transition densities on a lattice (CSV for d = 1, binary with sidecar).
    Density(RunArgs),
    /// Total-variation decay over a t-sweep, fitted against the model's law.
    TvRate(RunArgs),
    /// Gradient-norm decay over a t-sweep, fitted against the model's law.
    GradRate(RunArgs),
    /// Integral condition, rescaled envelopes and symbol-derivative bounds.
    VerifyBounds(RunArgs),
    /// Monte Carlo comparison against the lattice density.
    McCheck(McArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Model specification (JSON).
    #[arg(long)]
    pub model: PathBuf,
    /// Times as MIN:MAX:POINTS (log-spaced) or a single value.
    #[arg(long = "t")]
    pub t: Option<TGrid>,
    /// Spatial shift |x − y| for TV distances.
    #[arg(long, default_value_t = 1.0)]
    pub shift: f64,
    /// Lattice points per axis (power of two).
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Lattice half-width.
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Expected model dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Asymptotic regime; also the default t-window.
    #[arg(long, value_enum, default_value_t = RegimeArg::Large)]
    pub regime: RegimeArg,
    /// Gate tolerance override NAME=VALUE (repeatable); see `Tolerances`.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Number of sampled paths.
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    /// Small-jump cutoff ε.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Partition cells for the empirical TV bound.
    #[arg(long, default_value_t = 64)]
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Small,
    Large,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Small => Regime::Small,
            RegimeArg::Large => Regime::Large,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log_spaced: bool,
}

impl TGrid {
    pub fn single(t: f64) -> Self {
        TGrid { min: t, max: t, points: 1, log_spaced: true }
    }

    pub fn window(regime: Regime, points: usize) -> Self {
        let (min, max) = regime.window();
        TGrid { min, max, points, log_spaced: true }
    }

    pub fn times(&self) -> Vec<f64> {
        log_times(self.min, self.max, self.points)
    }
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        let grid = match parts.as_slice() {
            [t] => TGrid::single(num(t)?),
            [a, b, n] => TGrid {
                min: num(a)?,
                max: num(b)?,
                points: n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?,
                log_spaced: true,
            },
            _ => return Err("expected MIN:MAX:POINTS or a single time".into()),
        };
        if !(grid.min > 0.0 && grid.max.is_finite()) {
            return Err("times must be positive and finite".into());
        }
        if grid.points == 0 {
            return Err("POINTS must be at least 1".into());
        }
        if grid.points > 1 && grid.min >= grid.max {
            return Err("MIN must be below MAX".into());
        }
        if grid.points == 1 && grid.min != grid.max {
            return Err("a single point needs MIN = MAX".into());
        }
        Ok(grid)
    }
}


/// Gate tolerances. Names on the command line match the field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// |mass − 1| for density grids.
    pub mass: f64,
    /// Imaginary residual relative to max |p| for symmetric models.
    pub imag: f64,
    /// Relative rise allowed in a decay series.
    pub monotone: f64,
    /// Spread factor of the integral-condition ratios around their median.
    pub integral: f64,
    /// Spread factor of the rescaled envelopes around their median.
    pub envelope: f64,
    /// Multiple of ψ allowed for derivative envelopes.
    pub psi: f64,
    /// Multiples of √(cells/n) added to the lattice TV in mc-check.
    pub mc_noise: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { mass: 1e-4, imag: 1e-8, monotone: 0.01, integral: 3.0, envelope: 2.0, psi: 10.0, mc_noise: 3.0 }
    }
}

impl Tolerances {
    pub fn parse(overrides: &[String]) -> Result<Self, String> {
        let mut tol = Tolerances::default();
        for item in overrides {
            let (name, value) = item.split_once('=').ok_or_else(|| format!("`{item}` is not NAME=VALUE"))?;
            let value: f64 = value.trim().parse().map_err(|e| format!("`{item}`: {e}"))?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(format!("`{item}`: tolerances must be positive"));
            }
            let slot = match name.trim() {
                "mass" => &mut tol.mass,
                "imag" => &mut tol.imag,
                "monotone" => &mut tol.monotone,
                "integral" => &mut tol.integral,
                "envelope" => &mut tol.envelope,
                "psi" => &mut tol.psi,
                "mc_noise" => &mut tol.mc_noise,
                other => return Err(format!("unknown tolerance `{other}`")),
            };
            *slot = value;
        }
        Ok(tol)
    }
}
