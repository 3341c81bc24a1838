//! Estimation, single solves, sweeps and oracle runs for the CPT
//! optimal-investment solvers.

// `!(x > 0)` is deliberate: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod estimate;
pub mod run;
pub mod sweep;

pub use config::{ConfigError, Format, Mode, RunConfig};
pub use estimate::{annualized_rate_to_period, estimate_lognormal, read_prices, weekly_closes, Estimate, PricePoint};
pub use run::{solve_once, Diagnostics, RunSummary};
pub use sweep::{read_csv, sweep, write_csv, Axis, SweepResultRow, SweepSpec};
