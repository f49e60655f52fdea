//! Lattice densities of Lévy processes and the bounds built on them.

mod bounds;
mod export;
mod grid;
mod lattice;
mod tail;

pub use bounds::{
    envelope_check, integral_condition, psi_factor, psi_factor_at, rescaled_density, symbol_derivative_check,
    BoundReport, DerivativeBoundReport, Envelope, IntegralReport,
};
pub use export::{sidecar_path, write_binary, write_csv, Sidecar};
pub use grid::{GridSpec, CUTOFF_DECAY, HALF_WIDTH_UNITS};
pub use lattice::{compile_for, density, density_with, DensityGrid, DensityMeta, Diagnostics, MASS_HARD_LIMIT};
pub(crate) use lattice::shifted;
pub use tail::LineTail;
