//! Numerical laboratory for pure-jump Lévy processes: characteristic
//! exponents from Lévy-measure specifications, lattice Fourier inversion of
//! transition densities, total-variation and gradient decay rates, and a
//! Monte Carlo cross-check.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod density;
pub mod error;
pub mod mc;
pub mod rates;
pub mod quad;
pub mod symbol;

pub use error::{LevyError, Result};
