//! Cumulative prospect theory valuation of single-period strategies in a
//! market with proportional transaction costs, with closed-form optimal
//! investment for power utility (continuous returns) and exponential utility
//! (binomial returns), plus a brute-force oracle.
//!
//! Everything numerical is generic over [`Real`] (`f32`, `f64`); the
//! closed-form market algebra is generic over [`Field`] and also runs on exact
//! rationals. The aliases at the crate root fix the scalar to `f64`.

// `!(x > 0)` is deliberate: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binomial;
pub mod continuous;
pub mod distribution;
pub mod error;
pub mod market;
pub mod oracle;
pub mod prospect;
pub mod quadrature;
pub mod scalar;
pub mod solution;
pub mod special;
pub mod utility;
pub mod weighting;

pub use distribution::{ReturnLaw, SignedDistribution};
pub use error::{Error, Result};
pub use market::{ArbitrageCheck, ArbitrageViolation, Excess, LossSets, MarketModel, Portfolio};
pub use prospect::{check_finiteness, prospect_value, CptPreference, Finiteness, ProspectBreakdown, Tail};
pub use scalar::{Field, Real};
pub use solution::{Optimum, Solution};
pub use utility::{Side, UtilityPair};
pub use weighting::WeightingPair;

pub type Market = market::MarketModel<f64>;
pub type Law = distribution::ReturnLaw<f64>;
pub type Dist = distribution::SignedDistribution<f64>;
pub type Holdings = market::Portfolio<f64>;
