//! Brute-force verification: `J(theta)` straight from the wealth definitions,
//! grid search for its maximum, and agreement checks against a closed-form
//! solution.

use rayon::prelude::*;

use crate::distribution::SignedDistribution;
use crate::error::{invalid, Result};
use crate::market::{MarketModel, Portfolio};
use crate::prospect::{prospect_value, CptPreference};
use crate::scalar::Real;
use crate::solution::{Optimum, Solution};
use crate::utility::UtilityPair;

/// Agreement tolerance on `J` for discrete return laws.
pub const DISCRETE_TOL_J: f64 = 1e-6;
/// Agreement tolerance on `J` for continuous return laws.
pub const CONTINUOUS_TOL_J: f64 = 1e-5;
/// Allowed gap to the limit prospect at the top rung of the ladder.
pub const LIMIT_TOL: f64 = 1e-9;

/// Search window and resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub lo: T,
    pub hi: T,
    pub n_points: usize,
    /// Each round re-grids two steps either side of the incumbent at ten
    /// times the resolution.
    pub refinement_rounds: usize,
    /// Overrides the law-dependent tolerance on `J`.
    pub tol_j: Option<T>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        let spec = GridSpec {
            lo,
            hi,
            n_points: 4001,
            refinement_rounds: 2,
            tol_j: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `[-10(1 + |theta|), 10(1 + |theta|)]`.
    pub fn around(theta: T) -> Self {
        let half = T::lit(10.0) * (T::one() + theta.abs());
        GridSpec::new(-half, half).expect("nonempty window")
    }

    pub fn with_points(mut self, n_points: usize) -> Result<Self> {
        self.n_points = n_points;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(invalid("grid", "need finite lo < hi"));
        }
        if self.n_points < 3 {
            return Err(invalid("n_points", "must be >= 3"));
        }
        Ok(())
    }

    /// Spacing of the last refinement round.
    pub fn final_step(&self) -> T {
        let coarse = (self.hi - self.lo) / T::lit((self.n_points - 1) as f64);
        coarse / T::lit(10f64.powi(self.refinement_rounds as i32))
    }
}

/// Law of `D = W(theta) - B`, built from the wealth formulas alone.
///
/// Discrete laws map atom by atom. For continuous laws `D` is affine in the
/// gross return `G` on `G > 0`, so two evaluations pin it down.
pub fn gap_law<T: Real>(portfolio: &Portfolio<T>, market: &MarketModel<T>, theta: T) -> SignedDistribution<T> {
    if theta == T::zero() {
        // W(0) = B path by path; skip the rounding residue of the two formulas
        return SignedDistribution::constant(T::zero());
    }
    let d = |g: T| market.terminal_wealth(portfolio, &theta, &g) - market.reference_wealth(portfolio, &g);
    match market.returns().atoms() {
        Some(atoms) => {
            let mapped = atoms.into_iter().map(|(g, p)| (d(g), p)).collect();
            SignedDistribution::discrete(mapped).expect("finite atoms")
        }
        None => {
            let (at1, at2) = (d(T::one()), d(T::lit(2.0)));
            let slope = at2 - at1;
            SignedDistribution::affine(market.returns(), at1 - slope, slope)
        }
    }
}

/// `J(theta) = V(W(theta) - B)`.
pub fn evaluate_j<T: Real>(
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
    theta: T,
) -> Result<T> {
    if portfolio.y0 > T::zero() && theta < -portfolio.y0 {
        return Err(invalid("theta", "short sales limited to the initial holding"));
    }
    Ok(prospect_value(pref, &gap_law(portfolio, market, theta))?.total)
}

/// Values this close to the grid maximum (relative to `1 + |max|`) are
/// indistinguishable from it in floating point.
pub const ROUNDING_BAND: f64 = 64.0 * f64::EPSILON;

/// Best grid point found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum<T> {
    pub theta: T,
    pub j: T,
    /// Spacing of the grid the optimum was taken from.
    pub step: T,
    /// Hull of the evaluated points whose `J` is within [`ROUNDING_BAND`] of
    /// the maximum; where `J` is flat to rounding the argmax is only known
    /// up to this range.
    pub plateau: (T, T),
}

impl<T: Real> GridOptimum<T> {
    /// Distance from `theta` to the plateau.
    pub fn distance(&self, theta: T) -> T {
        let (a, b) = self.plateau;
        (a - theta).max(theta - b).max(T::zero())
    }
}

fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let width = hi - lo;
    let last = T::lit((n - 1) as f64);
    (0..n).map(|i| lo + width * T::lit(i as f64) / last).collect()
}

fn best<T: Real>(points: &[T], values: &[T]) -> (T, T) {
    let mut idx = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[idx] {
            idx = i;
        }
    }
    (points[idx], values[idx])
}

fn evaluate_all<T: Real>(
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
    points: &[T],
) -> Result<Vec<T>> {
    points
        .par_iter()
        .map(|&t| evaluate_j(portfolio, market, pref, t))
        .collect()
}

/// Grid argmax of `J` over `[lo, hi]` (clipped to `theta >= -y0` when the
/// investor holds stock), then refined around the incumbent.
pub fn grid_search<T: Real>(
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
    spec: &GridSpec<T>,
) -> Result<GridOptimum<T>> {
    spec.validate()?;
    let mut lo = spec.lo;
    if portfolio.y0 > T::zero() {
        lo = lo.max(-portfolio.y0);
    }
    let hi = spec.hi;
    if !(lo < hi) {
        return Err(invalid("grid", "window lies below the short-sale limit"));
    }
    let mut points = linspace(lo, hi, spec.n_points);
    let mut values = evaluate_all(portfolio, market, pref, &points)?;
    let (mut theta, mut j) = best(&points, &values);
    let mut step = (hi - lo) / T::lit((spec.n_points - 1) as f64);
    for _ in 0..spec.refinement_rounds {
        let two = T::lit(2.0) * step;
        let (a, b) = ((theta - two).max(lo), (theta + two).min(hi));
        step = step / T::lit(10.0);
        let n = ((b - a) / step).round().to_usize().unwrap_or(0) + 1;
        let fine = linspace(a, b, n.max(3));
        let fine_values = evaluate_all(portfolio, market, pref, &fine)?;
        let (t, v) = best(&fine, &fine_values);
        if v > j {
            theta = t;
            j = v;
        }
        points.extend(fine);
        values.extend(fine_values);
    }
    let floor = j - T::lit(ROUNDING_BAND) * (T::one() + j.abs());
    let plateau = points
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v >= floor)
        .fold((theta, theta), |(a, b), (t, _)| (a.min(*t), b.max(*t)));
    Ok(GridOptimum {
        theta,
        j,
        step,
        plateau,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Agreement<T> {
    Match,
    /// `theta` is the worst offending strategy and `gap` the `J` excess of
    /// the oracle over the claimed optimum there.
    Mismatch {
        theta: T,
        gap: T,
        reason: String,
    },
}

impl<T> Agreement<T> {
    pub fn is_match(&self) -> bool {
        matches!(self, Agreement::Match)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport<T> {
    pub argmax_theta: T,
    pub max_j: T,
    /// The claimed optimum as a number (`+-inf` for unbounded kinds).
    pub closed_form_theta: T,
    /// Oracle `J` at the claimed optimum (limit prospect for unbounded kinds).
    pub closed_form_j: T,
    pub agreement: Agreement<T>,
}

/// The law-dependent tolerance on `J` unless `GridSpec::tol_j` overrides it.
pub fn tolerance<T: Real>(market: &MarketModel<T>, spec: &GridSpec<T>) -> T {
    spec.tol_j.unwrap_or_else(|| {
        T::lit(if market.returns().is_discrete() {
            DISCRETE_TOL_J
        } else {
            CONTINUOUS_TOL_J
        })
    })
}

/// Checks a solver's answer against brute force.
pub fn verify<T: Real>(
    solution: &Solution<T>,
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
    spec: &GridSpec<T>,
) -> Result<OracleReport<T>> {
    let tol = tolerance(market, spec);
    match solution.optimum {
        Optimum::Finite(theta) => verify_point(solution, theta, portfolio, market, pref, spec, tol),
        Optimum::Interval { lo, hi } => verify_interval(solution, lo, hi, portfolio, market, pref, spec, tol),
        Optimum::PlusInfinity => certify_ladder(solution, T::one(), portfolio, market, pref),
        Optimum::MinusInfinity => certify_ladder(solution, -T::one(), portfolio, market, pref),
    }
}

fn verify_point<T: Real>(
    solution: &Solution<T>,
    theta: T,
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
    spec: &GridSpec<T>,
    tol: T,
) -> Result<OracleReport<T>> {
    let grid = grid_search(portfolio, market, pref, spec)?;
    let claimed = evaluate_j(portfolio, market, pref, theta)?;
    let gap = grid.j - claimed;
    let agreement = if gap.abs() > tol {
        Agreement::Mismatch {
            theta: grid.theta,
            gap,
            reason: format!("grid maximum differs from J(theta*) by {gap}"),
        }
    } else if grid.distance(theta) > grid.step {
        Agreement::Mismatch {
            theta: grid.theta,
            gap,
            reason: format!(
                "grid argmax {} (plateau {:?}) is more than one step from {theta}",
                grid.theta, grid.plateau
            ),
        }
    } else if (solution.prospect - claimed).abs() > tol {
        Agreement::Mismatch {
            theta,
            gap: claimed - solution.prospect,
            reason: format!("reported prospect {} but J(theta*) = {claimed}", solution.prospect),
        }
    } else {
        Agreement::Match
    };
    Ok(OracleReport {
        argmax_theta: grid.theta,
        max_j: grid.j,
        closed_form_theta: theta,
        closed_form_j: claimed,
        agreement,
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_interval<T: Real>(
    solution: &Solution<T>,
    lo: T,
    hi: T,
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
    spec: &GridSpec<T>,
    tol: T,
) -> Result<OracleReport<T>> {
    let ten = T::lit(10.0);
    let (a, b) = if lo.is_finite() {
        (lo, hi.min(lo + ten))
    } else if hi.is_finite() {
        (hi - ten, hi)
    } else {
        (-ten * T::lit(0.5), ten * T::lit(0.5))
    };
    let samples = linspace(a, b, 11);
    let values = evaluate_all(portfolio, market, pref, &samples)?;
    let reference = solution.prospect;
    let (mut worst_theta, mut worst_gap) = (a, T::zero());
    for (&t, &v) in samples.iter().zip(&values) {
        if (v - reference).abs() > worst_gap.abs() {
            worst_theta = t;
            worst_gap = v - reference;
        }
    }
    let grid = grid_search(portfolio, market, pref, spec)?;
    let agreement = if worst_gap.abs() > tol {
        Agreement::Mismatch {
            theta: worst_theta,
            gap: worst_gap,
            reason: "J is not constant on the optimal interval".into(),
        }
    } else if grid.j - reference > tol {
        Agreement::Mismatch {
            theta: grid.theta,
            gap: grid.j - reference,
            reason: "grid point beats the optimal interval".into(),
        }
    } else {
        Agreement::Match
    };
    Ok(OracleReport {
        argmax_theta: grid.theta,
        max_j: grid.j,
        closed_form_theta: solution.optimum.representative().unwrap_or(a),
        closed_form_j: reference,
        agreement,
    })
}

/// Smallest magnitude of `D` per unit strategy in the given direction, so the
/// ladder starts where the gaps are of order one.
fn ladder_scale<T: Real>(portfolio: &Portfolio<T>, market: &MarketModel<T>, direction: T) -> T {
    let unit = gap_law(portfolio, market, direction);
    let magnitude = match unit.atoms() {
        Some(atoms) => atoms
            .iter()
            .map(|a| a.0.abs())
            .filter(|m| *m > T::zero())
            .fold(T::infinity(), T::min),
        None => T::one(),
    };
    if magnitude.is_finite() {
        magnitude
    } else {
        T::one()
    }
}

/// Geometric ladder `10^k / (eta * kappa)`, `k = 0..=3`, in the unbounded
/// direction: `J` must never decrease and must rise overall; a finite limit
/// prospect must be reached within [`LIMIT_TOL`] at the top rung.
fn certify_ladder<T: Real>(
    solution: &Solution<T>,
    direction: T,
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
) -> Result<OracleReport<T>> {
    let eta = match pref.utility {
        UtilityPair::Exponential {
            eta_plus, eta_minus, ..
        } => eta_plus.min(eta_minus),
        UtilityPair::Power { .. } => T::one(),
    };
    let base = T::one() / (eta * ladder_scale(portfolio, market, direction));
    let rungs: Vec<T> = (0..4).map(|k| direction * base * T::lit(10f64.powi(k))).collect();
    let values = evaluate_all(portfolio, market, pref, &rungs)?;
    let mut agreement = Agreement::Match;
    for k in 1..rungs.len() {
        if values[k] < values[k - 1] {
            agreement = Agreement::Mismatch {
                theta: rungs[k],
                gap: values[k] - values[k - 1],
                reason: "J decreases along the ladder".into(),
            };
            break;
        }
    }
    let (top_theta, top) = (rungs[3], values[3]);
    if agreement.is_match() && !(top > values[0]) {
        agreement = Agreement::Mismatch {
            theta: top_theta,
            gap: top - values[0],
            reason: "J does not rise along the ladder".into(),
        };
    }
    let limit = solution.prospect;
    if agreement.is_match() && limit.is_finite() && (top - limit).abs() > T::lit(LIMIT_TOL) {
        agreement = Agreement::Mismatch {
            theta: top_theta,
            gap: top - limit,
            reason: format!("J at the top rung is {top}, limit prospect {limit}"),
        };
    }
    if agreement.is_match() && limit.is_infinite() && !(limit > T::zero()) {
        agreement = Agreement::Mismatch {
            theta: top_theta,
            gap: top,
            reason: "unbounded optimum with a non-positive supremum".into(),
        };
    }
    Ok(OracleReport {
        argmax_theta: top_theta,
        max_j: top,
        closed_form_theta: direction * T::infinity(),
        closed_form_j: limit,
        agreement,
    })
}

/// Convenience wrapper: grid centred on the claimed optimum.
pub fn verify_default<T: Real>(
    solution: &Solution<T>,
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
) -> Result<OracleReport<T>> {
    let centre = match solution.optimum {
        Optimum::Finite(t) => t,
        _ => T::zero(),
    };
    verify(solution, portfolio, market, pref, &GridSpec::around(centre))
}
