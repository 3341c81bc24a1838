//! Closed-form optimal investment for power utility.
//!
//! For `theta >= 0` the gap to the reference point is `theta * Z1`, and for
//! `theta <= 0` it is `theta * Z2` (holding is sold, `y0 > 0`) or `theta * Z3`
//! (short sale, `y0 = 0`). Positive homogeneity of the power utility turns the
//! prospect into `J(theta) = g theta^alpha - k l theta^beta` on each half-line.

use crate::distribution::SignedDistribution;
use crate::error::{Error, Result};
use crate::market::{ArbitrageCheck, Excess, MarketModel, Portfolio};
use crate::prospect::{check_finiteness, tail_integral, CptPreference, Finiteness, Tail};
use crate::quadrature::{Integral, Tolerance};
use crate::scalar::Real;
use crate::solution::{Optimum, Solution};
use crate::utility::{Side, UtilityPair};

/// Target for the gains/losses integrals. The relative target is tighter than
/// the general default because the ratios feed sign decisions.
pub const STRICT_TOLERANCE: Tolerance = Tolerance {
    abs: 0.0,
    rel: 1e-11,
    max_panels: 2000,
};

/// Smallest classification band for `k` against the ratios and for ties.
pub const MIN_BAND: f64 = 1e-9;

/// Gains and losses integrals of one half-line with their error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLine<T> {
    pub gain: T,
    pub loss: T,
    pub gain_error: T,
    pub loss_error: T,
}

impl<T: Real> HalfLine<T> {
    fn from_integrals(gain: Integral<T>, loss: Integral<T>) -> Self {
        HalfLine {
            gain: gain.value,
            loss: loss.value,
            gain_error: gain.error,
            loss_error: loss.error,
        }
    }

    /// `gain / loss`, undefined when the loss integral vanishes.
    pub fn ratio(&self) -> Option<T> {
        (self.loss > T::zero()).then(|| self.gain / self.loss)
    }

    fn ratio_error(&self) -> T {
        match self.ratio() {
            Some(r) if self.gain > T::zero() => r * (self.gain_error / self.gain + self.loss_error / self.loss),
            Some(_) => self.gain_error / self.loss,
            None => T::zero(),
        }
    }
}

/// How much of the probability mass is a loss for every strategy on a half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossMass {
    Empty,
    Partial,
    Full,
}

/// Everything the case analysis needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCaseInputs<T> {
    /// `P(A1) = P(Z1 < 0)`.
    pub p_long_loss: T,
    pub long_mass: LossMass,
    /// `P(A2) = P(Z2 > 0)`, or `P(A3) = P(Z3 > 0)` without a holding.
    pub p_short_loss: T,
    pub short_mass: LossMass,
    /// `g1`, `l1`.
    pub long: HalfLine<T>,
    /// `g2`, `l2` (or their `Z3` counterparts).
    pub short: HalfLine<T>,
    pub alpha: T,
    pub beta: T,
    pub k: T,
    /// Short-sale bound `y0`; `None` when short selling is unconstrained.
    pub y0: Option<T>,
}

/// `K1`, `K2` and their maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRatios<T> {
    pub k1: T,
    pub k2: T,
    pub k_max: T,
}

fn power_parameters<T: Real>(pref: &CptPreference<T>) -> Result<(T, T, T)> {
    match pref.utility {
        UtilityPair::Power { alpha, beta, k } => Ok((alpha, beta, k)),
        UtilityPair::Exponential { .. } => Err(Error::Precondition(
            "the continuous-return solver needs power utility".into(),
        )),
    }
}

fn with_fallback<T: Real>(run: impl Fn(&Tolerance) -> Result<Integral<T>>) -> Result<Integral<T>> {
    run(&STRICT_TOLERANCE).or_else(|_| run(&Tolerance::default()))
}

/// `g1 = int_0^inf z^alpha d[-w+(S(z))]` and
/// `l1 = int_-inf^0 (-z)^beta d[w-(F(z))]` for `Z1`.
pub fn long_integrals<T: Real>(pref: &CptPreference<T>, z1: &SignedDistribution<T>) -> Result<HalfLine<T>> {
    let (alpha, beta, _) = power_parameters(pref)?;
    let w = &pref.weighting;
    let gain = with_fallback(|tol| tail_integral(z1, Tail::Upper, w, Side::Gain, |z| z.powf(alpha), tol))?;
    let loss = with_fallback(|tol| tail_integral(z1, Tail::Lower, w, Side::Loss, |z| z.powf(beta), tol))?;
    Ok(HalfLine::from_integrals(gain, loss))
}

/// `g2` on the lower tail of `Z2` (gains of a sale) and `l2` on its upper tail.
pub fn short_integrals<T: Real>(pref: &CptPreference<T>, z2: &SignedDistribution<T>) -> Result<HalfLine<T>> {
    let (alpha, beta, _) = power_parameters(pref)?;
    let w = &pref.weighting;
    let gain = with_fallback(|tol| tail_integral(z2, Tail::Lower, w, Side::Gain, |z| z.powf(alpha), tol))?;
    let loss = with_fallback(|tol| tail_integral(z2, Tail::Upper, w, Side::Loss, |z| z.powf(beta), tol))?;
    Ok(HalfLine::from_integrals(gain, loss))
}

fn classify<T: Real>(loss: T, no_loss: T) -> LossMass {
    if !(loss > T::zero()) {
        LossMass::Empty
    } else if !(no_loss > T::zero()) {
        LossMass::Full
    } else {
        LossMass::Partial
    }
}

impl<T: Real> PowerCaseInputs<T> {
    /// Builds the inputs for `portfolio` (short side via `Z2` when `y0 > 0`,
    /// via `Z3` when `y0 = 0`).
    pub fn from_market(portfolio: &Portfolio<T>, market: &MarketModel<T>, pref: &CptPreference<T>) -> Result<Self> {
        let (alpha, beta, k) = power_parameters(pref)?;
        if let ArbitrageCheck::Fail(v) = market.check_no_arbitrage() {
            return Err(Error::Precondition(format!("no-arbitrage violated: {v}")));
        }
        if check_finiteness(pref, market.returns()) == Finiteness::Unverified {
            return Err(Error::Precondition(
                "prospect finiteness cannot be certified for this law and weighting".into(),
            ));
        }
        let zero = T::zero();
        let (short_excess, y0) = if portfolio.y0 > zero {
            (Excess::Z2, Some(portfolio.y0))
        } else if portfolio.y0 == zero {
            (Excess::Z3, None)
        } else {
            return Err(Error::Precondition("y0 must be >= 0".into()));
        };
        let z1 = market.excess_transform(Excess::Z1);
        let zs = market.excess_transform(short_excess);
        let p_long_loss = z1.cdf_strict(zero);
        let p_long_gain = z1.sf_weak(zero);
        let p_short_loss = zs.sf(zero);
        let p_short_gain = zs.cdf(zero);
        let long = long_integrals(pref, &z1)?;
        let short = if p_short_loss > zero || p_short_gain > zero {
            short_integrals(pref, &zs)?
        } else {
            HalfLine::from_integrals(Integral::zero(), Integral::zero())
        };
        Ok(PowerCaseInputs {
            p_long_loss,
            long_mass: classify(p_long_loss, p_long_gain),
            p_short_loss,
            short_mass: classify(p_short_loss, p_short_gain),
            long,
            short,
            alpha,
            beta,
            k,
            y0,
        })
    }

    pub fn k1(&self) -> Option<T> {
        self.long.ratio()
    }

    /// `K2`; undefined when the short side carries no losses.
    pub fn k2(&self) -> Option<T> {
        match self.short_mass {
            LossMass::Empty => None,
            _ => self.short.ratio(),
        }
    }

    /// Prospect of buying `theta >= 0`.
    pub fn j_long(&self, theta: T) -> T {
        self.long.gain * theta.powf(self.alpha) - self.k * self.long.loss * theta.powf(self.beta)
    }

    /// Prospect of selling `-theta >= 0`.
    pub fn j_short(&self, theta: T) -> T {
        let s = -theta;
        self.short.gain * s.powf(self.alpha) - self.k * self.short.loss * s.powf(self.beta)
    }

    /// `J(theta)` from the factorised form.
    pub fn j(&self, theta: T) -> T {
        if theta >= T::zero() {
            self.j_long(theta)
        } else {
            self.j_short(theta)
        }
    }

    fn j_error(&self, theta: T) -> T {
        let (h, s) = if theta >= T::zero() {
            (&self.long, theta)
        } else {
            (&self.short, -theta)
        };
        h.gain_error * s.powf(self.alpha) + self.k * h.loss_error * s.powf(self.beta)
    }

    fn band(&self, err: T) -> T {
        T::lit(MIN_BAND).max(T::lit(10.0) * err)
    }

    fn candidate(&self, ratio: T) -> T {
        (self.alpha * ratio / (self.beta * self.k)).powf((self.beta - self.alpha).recip())
    }

    /// `theta1 = (alpha K1 / (beta k))^(1/(beta-alpha))`.
    pub fn theta1(&self) -> Option<T> {
        (self.alpha < self.beta)
            .then(|| self.k1().map(|r| self.candidate(r)))
            .flatten()
    }

    /// `theta2 = -(alpha K2 / (beta k))^(1/(beta-alpha))`.
    pub fn theta2(&self) -> Option<T> {
        (self.alpha < self.beta)
            .then(|| self.k2().map(|r| -self.candidate(r)))
            .flatten()
    }
}

pub fn k_ratios<T: Real>(inputs: &PowerCaseInputs<T>) -> Result<KRatios<T>> {
    let k1 = inputs.k1().ok_or(Error::UndefinedRatio("K1: l1 = 0"))?;
    let k2 = inputs.k2().ok_or(Error::UndefinedRatio("K2: l2 = 0"))?;
    Ok(KRatios {
        k1,
        k2,
        k_max: k1.max(k2),
    })
}

/// `(theta1, theta2)`; needs `alpha < beta` and both ratios.
pub fn interior_candidates<T: Real>(inputs: &PowerCaseInputs<T>) -> Result<(T, T)> {
    if !(inputs.alpha < inputs.beta) {
        return Err(Error::Precondition("interior candidates need alpha < beta".into()));
    }
    let r = k_ratios(inputs)?;
    Ok((inputs.candidate(r.k1), -inputs.candidate(r.k2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Versus {
    Above,
    Equal,
    Below,
}

/// `k` against a ratio with the classification band; `(relation, in_band)`.
fn compare_k<T: Real>(inputs: &PowerCaseInputs<T>, half: &HalfLine<T>) -> (Versus, bool) {
    let ratio = half.ratio().unwrap_or(T::zero());
    let band = inputs.band(half.ratio_error());
    let gap = inputs.k - ratio;
    if gap.abs() <= band {
        (Versus::Equal, gap != T::zero())
    } else if gap > T::zero() {
        (Versus::Above, false)
    } else {
        (Versus::Below, false)
    }
}

/// Sub-problem on `theta >= 0`.
pub fn solve_long<T: Real>(inputs: &PowerCaseInputs<T>) -> Result<Solution<T>> {
    let zero = T::zero();
    if inputs.long_mass == LossMass::Full {
        return Ok(Solution::new(Optimum::Finite(zero), "T3.2-1a", zero));
    }
    if inputs.alpha < inputs.beta {
        let t1 = inputs.theta1().ok_or(Error::UndefinedRatio("K1: l1 = 0"))?;
        return Ok(Solution::new(Optimum::Finite(t1), "T3.2-2", inputs.j_long(t1)));
    }
    let (rel, band) = compare_k(inputs, &inputs.long);
    let sol = match rel {
        Versus::Above => Solution::new(Optimum::Finite(zero), "T3.2-1b", zero),
        Versus::Equal => Solution::new(
            Optimum::Interval {
                lo: zero,
                hi: T::infinity(),
            },
            "T3.2-3",
            zero,
        ),
        Versus::Below => Solution::new(Optimum::PlusInfinity, "T3.2-4", T::infinity()),
    };
    Ok(sol.flagged(band))
}

/// Sub-problem on `theta <= 0`: bounded by `-y0` when a holding is sold,
/// unbounded for a pure short sale.
pub fn solve_short<T: Real>(inputs: &PowerCaseInputs<T>) -> Result<Solution<T>> {
    match inputs.y0 {
        Some(y0) => solve_short_bounded(inputs, y0),
        None => solve_short_free(inputs),
    }
}

fn solve_short_bounded<T: Real>(inputs: &PowerCaseInputs<T>, y0: T) -> Result<Solution<T>> {
    let zero = T::zero();
    let floor = -y0;
    let at_floor = |label| Solution::new(Optimum::Finite(floor), label, inputs.j_short(floor));
    match inputs.short_mass {
        LossMass::Full => return Ok(Solution::new(Optimum::Finite(zero), "T3.3-1a", zero)),
        LossMass::Empty => return Ok(at_floor("T3.3-4a")),
        LossMass::Partial => {}
    }
    if inputs.alpha < inputs.beta {
        let t2 = inputs.theta2().ok_or(Error::UndefinedRatio("K2: l2 = 0"))?;
        // relative error of theta2 inherited from K2
        let rel = inputs.short.ratio_error() / inputs.k2().unwrap_or(T::one()) / (inputs.beta - inputs.alpha);
        let band = inputs.band(rel * t2.abs()).max(T::lit(MIN_BAND) * y0);
        if (t2 - floor).abs() <= band {
            let sol = Solution::new(Optimum::Finite(t2), "T3.3-2", inputs.j_short(t2));
            return Ok(sol.flagged(t2 != floor));
        }
        if t2 > floor {
            return Ok(Solution::new(Optimum::Finite(t2), "T3.3-2", inputs.j_short(t2)));
        }
        return Ok(at_floor("T3.3-4c"));
    }
    let (rel, band) = compare_k(inputs, &inputs.short);
    let sol = match rel {
        Versus::Above => Solution::new(Optimum::Finite(zero), "T3.3-1b", zero),
        Versus::Equal => Solution::new(
            Optimum::Interval { lo: floor, hi: zero },
            "T3.3-3",
            inputs.j_short(floor),
        ),
        Versus::Below => at_floor("T3.3-4b"),
    };
    Ok(sol.flagged(band))
}

fn solve_short_free<T: Real>(inputs: &PowerCaseInputs<T>) -> Result<Solution<T>> {
    let zero = T::zero();
    if inputs.short_mass == LossMass::Full {
        return Ok(Solution::new(Optimum::Finite(zero), "T3.4s-1a", zero));
    }
    if inputs.short_mass == LossMass::Empty {
        return Err(Error::Precondition("no-arbitrage requires P(Z3 > 0) > 0".into()));
    }
    if inputs.alpha < inputs.beta {
        let t2 = inputs.theta2().ok_or(Error::UndefinedRatio("K3: l3 = 0"))?;
        return Ok(Solution::new(Optimum::Finite(t2), "T3.4s-2", inputs.j_short(t2)));
    }
    let (rel, band) = compare_k(inputs, &inputs.short);
    let sol = match rel {
        Versus::Above => Solution::new(Optimum::Finite(zero), "T3.4s-1b", zero),
        Versus::Equal => Solution::new(
            Optimum::Interval {
                lo: T::neg_infinity(),
                hi: zero,
            },
            "T3.4s-3",
            zero,
        ),
        Versus::Below => Solution::new(Optimum::MinusInfinity, "T3.4s-4", T::infinity()),
    };
    Ok(sol.flagged(band))
}

/// Merges the two sub-problems into the overall optimum and its case label.
pub fn combine<T: Real>(inputs: &PowerCaseInputs<T>) -> Result<Solution<T>> {
    let long = solve_long(inputs)?;
    let short = solve_short(inputs)?;
    let boundary = long.boundary || short.boundary;
    let free = inputs.y0.is_none();
    let label = |bounded: &'static str, unbounded: &'static str| if free { unbounded } else { bounded };
    let a1_full = inputs.long_mass == LossMass::Full;
    let a2_full = inputs.short_mass == LossMass::Full;
    let a2_empty = inputs.short_mass == LossMass::Empty;
    let zero = T::zero();

    if inputs.alpha < inputs.beta {
        let sol = match (a1_full, inputs.short_mass) {
            (true, LossMass::Full) => Solution::new(Optimum::Finite(zero), label("T3.1-1a", "T3.4-1a"), zero),
            (true, LossMass::Empty) => Solution {
                case_id: "T3.1-4a",
                ..short
            },
            (true, LossMass::Partial) => {
                let id = if short.case_id.ends_with("-2") {
                    label("T3.1-3a", "T3.4-3a")
                } else {
                    "T3.1-4c"
                };
                Solution { case_id: id, ..short }
            }
            (false, LossMass::Full) => Solution {
                case_id: label("T3.1-2a", "T3.4-2a"),
                ..long
            },
            (false, _) => {
                // J scales with theta^alpha, so the floor is relative to the prospects
                let err = inputs.j_error(long.optimum.representative().unwrap_or(zero))
                    + inputs.j_error(short.optimum.representative().unwrap_or(zero));
                let scale = long.prospect.abs().max(short.prospect.abs());
                let tie = (T::lit(MIN_BAND) * scale).max(T::lit(10.0) * err);
                let gap = long.prospect - short.prospect;
                let short_is_interior = short.case_id.ends_with("-2");
                if gap >= -tie {
                    Solution {
                        case_id: label("T3.1-2b", "T3.4-2b"),
                        ..long
                    }
                    .flagged(gap.abs() <= tie)
                } else if short_is_interior {
                    Solution {
                        case_id: label("T3.1-3b", "T3.4-3b"),
                        ..short
                    }
                } else {
                    Solution {
                        case_id: "T3.1-4d",
                        ..short
                    }
                }
            }
        };
        return Ok(sol.flagged(boundary));
    }

    // alpha == beta: each half-line is 0, an interval, or unbounded/at the floor
    let long_unbounded = matches!(long.optimum, Optimum::PlusInfinity);
    let long_interval = matches!(long.optimum, Optimum::Interval { .. });
    let short_interval = matches!(short.optimum, Optimum::Interval { .. });
    let short_moves = match short.optimum {
        Optimum::Finite(t) => t < zero,
        Optimum::MinusInfinity => true,
        _ => false,
    };

    let sol = if long_unbounded {
        let id = if a2_full {
            label("T3.1-8a", "T3.4-8a")
        } else {
            label("T3.1-8b", "T3.4-8b")
        };
        Solution { case_id: id, ..long }
    } else if short_moves {
        let id = match (a1_full, a2_empty) {
            (true, true) => "T3.1-4a",
            (true, false) => label("T3.1-4b", "T3.4-4b"),
            (false, _) => label("T3.1-4e", "T3.4-4e"),
        };
        Solution { case_id: id, ..short }
    } else if long_interval && short_interval {
        Solution::new(
            Optimum::Interval {
                lo: short_floor(inputs),
                hi: T::infinity(),
            },
            label("T3.1-7", "T3.4-7"),
            inputs.y0.map_or(zero, |y| inputs.j_short(-y)),
        )
    } else if long_interval {
        let id = if a2_full {
            label("T3.1-5a", "T3.4-5a")
        } else {
            label("T3.1-5b", "T3.4-5b")
        };
        Solution { case_id: id, ..long }
    } else if short_interval {
        let id = if a1_full {
            label("T3.1-6a", "T3.4-6a")
        } else {
            label("T3.1-6b", "T3.4-6b")
        };
        Solution { case_id: id, ..short }
    } else {
        let id = match (a1_full, a2_full) {
            (true, true) => label("T3.1-1a", "T3.4-1a"),
            (true, false) => label("T3.1-1b", "T3.4-1b"),
            (false, true) => label("T3.1-1c", "T3.4-1c"),
            (false, false) => label("T3.1-1d", "T3.4-1d"),
        };
        Solution::new(Optimum::Finite(zero), id, zero)
    };
    Ok(sol.flagged(boundary))
}

fn short_floor<T: Real>(inputs: &PowerCaseInputs<T>) -> T {
    inputs.y0.map(|y| -y).unwrap_or(T::neg_infinity())
}

/// Optimal investment with a risky holding `y0 > 0` that may be sold but not
/// shorted.
pub fn solve<T: Real>(
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
) -> Result<Solution<T>> {
    if !(portfolio.y0 > T::zero()) {
        return Err(Error::Precondition("solve needs y0 > 0".into()));
    }
    combine(&PowerCaseInputs::from_market(portfolio, market, pref)?)
}

/// Optimal investment without a risky holding; short selling is unconstrained.
pub fn solve_zero_initial<T: Real>(x0: T, market: &MarketModel<T>, pref: &CptPreference<T>) -> Result<Solution<T>> {
    let portfolio = Portfolio::new(x0, T::zero());
    combine(&PowerCaseInputs::from_market(&portfolio, market, pref)?)
}

/// Inputs, candidates, sub-solutions and the merged optimum in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousAnalysis<T> {
    pub inputs: PowerCaseInputs<T>,
    pub k1: Option<T>,
    pub k2: Option<T>,
    pub theta1: Option<T>,
    pub theta2: Option<T>,
    pub long: Solution<T>,
    pub short: Solution<T>,
    pub solution: Solution<T>,
}

pub fn analyze<T: Real>(
    portfolio: &Portfolio<T>,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
) -> Result<ContinuousAnalysis<T>> {
    let inputs = PowerCaseInputs::from_market(portfolio, market, pref)?;
    Ok(ContinuousAnalysis {
        k1: inputs.k1(),
        k2: inputs.k2(),
        theta1: inputs.theta1(),
        theta2: inputs.theta2(),
        long: solve_long(&inputs)?,
        short: solve_short(&inputs)?,
        solution: combine(&inputs)?,
        inputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ReturnLaw;
    use crate::weighting::WeightingPair;

    fn power(alpha: f64, beta: f64, k: f64, w: WeightingPair<f64>) -> CptPreference<f64> {
        CptPreference::new(UtilityPair::power(alpha, beta, k).unwrap(), w).unwrap()
    }

    fn half(gain: f64, loss: f64) -> HalfLine<f64> {
        HalfLine {
            gain,
            loss,
            gain_error: 0.0,
            loss_error: 0.0,
        }
    }

    fn synthetic(long: HalfLine<f64>, short: HalfLine<f64>, alpha: f64, beta: f64, k: f64) -> PowerCaseInputs<f64> {
        PowerCaseInputs {
            p_long_loss: 0.5,
            long_mass: LossMass::Partial,
            p_short_loss: 0.5,
            short_mass: LossMass::Partial,
            long,
            short,
            alpha,
            beta,
            k,
            y0: Some(1.0),
        }
    }

    #[test]
    fn two_point_integrals_with_identity_weighting() {
        let q = 0.3;
        let z = SignedDistribution::discrete(vec![(1.0, q), (-1.0, 1.0 - q)]).unwrap();
        let pref = power(0.7, 0.9, 2.0, WeightingPair::Identity);
        let long = long_integrals(&pref, &z).unwrap();
        assert!((long.gain - q).abs() < 1e-15 && (long.loss - (1.0 - q)).abs() < 1e-15);
        let short = short_integrals(&pref, &z).unwrap();
        assert!((short.gain - (1.0 - q)).abs() < 1e-15 && (short.loss - q).abs() < 1e-15);
    }

    #[test]
    fn sure_loss_has_no_gain_integral() {
        let z = SignedDistribution::discrete(vec![(-1.0, 0.5), (-2.0, 0.5)]).unwrap();
        let pref = power(0.88, 0.88, 2.25, WeightingPair::tversky_kahneman(0.61, 0.69).unwrap());
        assert_eq!(long_integrals(&pref, &z).unwrap().gain, 0.0);
        let z = z.scaled(-1.0);
        assert_eq!(short_integrals(&pref, &z).unwrap().gain, 0.0);
    }

    #[test]
    fn candidate_identities() {
        // alpha K1 = beta k gives theta1 = 1
        let (alpha, beta, k) = (0.5, 0.88, 2.25);
        let k1 = beta * k / alpha;
        let inputs = synthetic(half(k1, 1.0), half(k1, 1.0), alpha, beta, k);
        let (t1, t2) = interior_candidates(&inputs).unwrap();
        assert!((t1 - 1.0).abs() < 1e-14);
        assert!((t2 + t1).abs() < 1e-14);
        let equal = synthetic(half(1.0, 1.0), half(1.0, 1.0), 0.88, 0.88, 2.25);
        assert!(interior_candidates(&equal).is_err());
    }

    #[test]
    fn ratios_need_losses() {
        let mut inputs = synthetic(half(1.0, 0.0), half(1.0, 2.0), 0.88, 0.88, 2.25);
        assert!(matches!(k_ratios(&inputs), Err(Error::UndefinedRatio(_))));
        inputs.long = half(1.0, 2.0);
        let r = k_ratios(&inputs).unwrap();
        assert_eq!((r.k1, r.k2, r.k_max), (0.5, 0.5, 0.5));
    }

    #[test]
    fn sub_problem_edge_cases() {
        let mut inputs = synthetic(half(0.0, 1.0), half(0.0, 0.0), 0.88, 0.88, 2.25);
        inputs.long_mass = LossMass::Full;
        inputs.short_mass = LossMass::Empty;
        let long = solve_long(&inputs).unwrap();
        assert_eq!((long.optimum, long.case_id), (Optimum::Finite(0.0), "T3.2-1a"));
        let short = solve_short(&inputs).unwrap();
        assert_eq!((short.optimum, short.case_id), (Optimum::Finite(-1.0), "T3.3-4a"));

        // alpha = beta, k = K2 exactly
        let inputs = synthetic(half(1.0, 1.0), half(2.25, 1.0), 0.88, 0.88, 2.25);
        let short = solve_short(&inputs).unwrap();
        assert_eq!(short.optimum, Optimum::Interval { lo: -1.0, hi: 0.0 });
        assert_eq!(short.case_id, "T3.3-3");
        assert!(!short.boundary);

        // alpha < beta, theta2 inside the constraint
        let inputs = synthetic(half(1.0, 1.0), half(1.0, 1.0), 0.5, 0.88, 2.25);
        let short = solve_short(&inputs).unwrap();
        assert_eq!(short.case_id, "T3.3-2");
        assert!(matches!(short.optimum, Optimum::Finite(t) if t > -1.0 && t < 0.0));
    }

    #[test]
    fn equal_powers_above_both_ratios_do_nothing() {
        let inputs = synthetic(half(1.5, 1.0), half(0.9, 1.0), 0.88, 0.88, 2.25);
        let sol = combine(&inputs).unwrap();
        assert_eq!((sol.optimum, sol.case_id), (Optimum::Finite(0.0), "T3.1-1d"));
        let mut rich = inputs;
        rich.long = half(3.0, 1.0);
        let sol = combine(&rich).unwrap();
        assert_eq!((sol.optimum, sol.case_id), (Optimum::PlusInfinity, "T3.1-8b"));
    }

    #[test]
    fn rescaling_gain_and_loss_keeps_the_argmax() {
        let base = synthetic(half(1.3, 0.8), half(0.7, 0.6), 0.6, 0.9, 2.25);
        let a = combine(&base).unwrap();
        let mut scaled = base;
        scaled.long = half(13.0, 8.0);
        let b = combine(&scaled).unwrap();
        assert_eq!(a.case_id, b.case_id);
        assert_eq!(a.optimum.representative(), b.optimum.representative());
    }

    #[test]
    fn symmetric_excess_favours_the_sale_under_costs() {
        let r = 0.03;
        let law = ReturnLaw::normal(r, 0.2).unwrap();
        let pref = power(0.88, 0.88, 2.25, WeightingPair::tversky_kahneman(0.61, 0.69).unwrap());
        let pf = Portfolio::new(1.0, 1.0);
        let frictionless = MarketModel::new(r, 0.0, law.clone()).unwrap();
        let a = analyze(&pf, &frictionless, &pref).unwrap();
        let (k1, k2) = (a.k1.unwrap(), a.k2.unwrap());
        assert!((k1 - k2).abs() < 1e-7 * k1, "{k1} {k2}");

        let costly = MarketModel::new(r, 0.01, law).unwrap();
        let a = analyze(&pf, &costly, &pref).unwrap();
        assert!(a.inputs.short.gain > a.inputs.long.gain);
        assert!(a.inputs.short.loss < a.inputs.long.loss);
        assert!(a.k2.unwrap() > a.k1.unwrap());
    }

    #[test]
    fn ftse_calibration_does_not_trade() {
        let law = ReturnLaw::lognormal(3.2932e-4, 7.4383e-3).unwrap();
        let pref = power(0.88, 0.88, 2.25, WeightingPair::tversky_kahneman(0.61, 0.69).unwrap());
        let m = MarketModel::new(1.3380e-5, 0.01, law).unwrap();
        let sol = solve(&Portfolio::new(1.0, 1.0), &m, &pref).unwrap();
        assert_eq!((sol.optimum, sol.case_id), (Optimum::Finite(0.0), "T3.1-1d"));
    }

    #[test]
    fn zero_holding_uses_the_free_short_side() {
        let law = ReturnLaw::lognormal(0.0, 0.2).unwrap();
        let pref = power(0.5, 0.88, 2.25, WeightingPair::tversky_kahneman(0.61, 0.69).unwrap());
        let m = MarketModel::new(0.02, 0.0, law).unwrap();
        let a = analyze(&Portfolio::new(1.0, 0.0), &m, &pref).unwrap();
        assert!(a.inputs.y0.is_none());
        assert!(a.solution.case_id.starts_with("T3.4-"));
        assert!(solve(&Portfolio::new(1.0, 0.0), &m, &pref).is_err());
    }
}
