//! Monte Carlo oracle: sampled increments and partition-based comparisons.

mod compare;
mod sampler;

pub use compare::{empirical_tv_lower, ks_against_grid, ks_statistic, KsResult, MIN_CELL_COUNT};
pub use sampler::{sample_increments, EmpiricalDist, SamplerConfig, SmallJumpMode, MAX_POISSON_MEAN, MIN_PATHS};
