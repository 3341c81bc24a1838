//! Closed-form optimal investment in the two-state market with exponential
//! utility and no initial risky holding.

use crate::distribution::ReturnLaw;
use crate::error::{Error, Result};
use crate::market::{ArbitrageCheck, MarketModel};
use crate::prospect::{discrete_gains, discrete_losses, CptPreference};
use crate::scalar::{Field, Real};
use crate::solution::{Optimum, Solution};
use crate::utility::{Side, UtilityPair};
use crate::weighting::WeightingPair;

/// Relative band for threshold and tie comparisons (closed-form quantities).
pub const BAND: f64 = 1e-12;

/// Replication weights on the buy branch (`buy_*`) and sell branch (`sell_*`).
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoProbabilities<T> {
    pub buy_up: T,
    pub buy_down: T,
    pub sell_up: T,
    pub sell_down: T,
}

pub fn pseudo_probabilities<T: Field>(u: &T, d: &T, r: &T, lambda: &T) -> PseudoProbabilities<T> {
    let one = T::one();
    let keep = one.clone() - lambda.clone();
    let bond = one + r.clone();
    let spread = u.clone() - d.clone();
    let buy_den = keep.clone() * spread.clone();
    PseudoProbabilities {
        buy_up: (bond.clone() - keep.clone() * d.clone()) / buy_den.clone(),
        buy_down: (keep.clone() * u.clone() - bond.clone()) / buy_den,
        sell_up: (keep.clone() * bond.clone() - d.clone()) / spread.clone(),
        sell_down: (u.clone() - keep * bond) / spread,
    }
}

/// A payoff on the two states.
#[derive(Debug, Clone, PartialEq)]
pub struct Payoff2<T> {
    pub xi_u: T,
    pub xi_d: T,
}

/// Strategy `theta` and initial cash `x` replicating a payoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication<T> {
    pub theta: T,
    pub x: T,
}

/// Buys when `xi_u >= xi_d` (costs paid on the sale at maturity), sells
/// otherwise (costs paid on the proceeds now).
pub fn replicate<T: Field>(u: &T, d: &T, r: &T, lambda: &T, xi: &Payoff2<T>) -> Replication<T> {
    let pp = pseudo_probabilities(u, d, r, lambda);
    let bond = T::one() + r.clone();
    let spread = u.clone() - d.clone();
    let diff = xi.xi_u.clone() - xi.xi_d.clone();
    if xi.xi_u >= xi.xi_d {
        let keep = T::one() - lambda.clone();
        Replication {
            theta: diff / (keep * spread),
            x: (pp.buy_up * xi.xi_u.clone() + pp.buy_down * xi.xi_d.clone()) / bond,
        }
    } else {
        Replication {
            theta: diff / spread,
            x: (pp.sell_up * xi.xi_u.clone() + pp.sell_down * xi.xi_d.clone()) / bond,
        }
    }
}

/// `max(1 - (1+r)/u, 1 - d/(1+r))`: no trade at or above this cost rate.
pub fn lambda_bar<T: Field>(u: &T, d: &T, r: &T) -> T {
    let one = T::one();
    let bond = one.clone() + r.clone();
    let a = one.clone() - bond.clone() / u.clone();
    let b = one - d.clone() / bond;
    if a >= b {
        a
    } else {
        b
    }
}

/// `zeta` thresholds; the second of each pair needs a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaThresholds<T> {
    /// `w+(1-p) / w-(p)`.
    pub bar1: T,
    /// `(pbd / pbu) bar1`.
    pub bar2: Option<T>,
    /// `w+(p) / w-(1-p)`.
    pub under1: T,
    /// `(psu / psd) under1`.
    pub under2: Option<T>,
}

/// Everything the binomial case analysis needs.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialInputs<T> {
    pub u: T,
    pub d: T,
    /// Down-state probability.
    pub p: T,
    pub r: T,
    pub lambda: T,
    pub pseudo: PseudoProbabilities<T>,
    pub zetas: ZetaThresholds<T>,
    pub eta: T,
    pub zeta: T,
    /// Reference wealth `(1 + r) x0`.
    pub reference: T,
    weighting: WeightingPair<T>,
}

fn thresholds<T: Real>(w: &WeightingPair<T>, p: T, pp: &PseudoProbabilities<T>) -> ZetaThresholds<T> {
    let one = T::one();
    let bar1 = w.value(Side::Gain, one - p) / w.value(Side::Loss, p);
    let under1 = w.value(Side::Gain, p) / w.value(Side::Loss, one - p);
    ZetaThresholds {
        bar1,
        bar2: (pp.buy_up > T::zero()).then(|| pp.buy_down / pp.buy_up * bar1),
        under1,
        under2: (pp.sell_down > T::zero()).then(|| pp.sell_up / pp.sell_down * under1),
    }
}

pub fn zeta_thresholds<T: Real>(inputs: &BinomialInputs<T>) -> ZetaThresholds<T> {
    inputs.zetas
}

impl<T: Real> BinomialInputs<T> {
    pub fn from_market(x0: T, market: &MarketModel<T>, pref: &CptPreference<T>) -> Result<Self> {
        let ReturnLaw::Binomial { u, d, p } = *market.returns() else {
            return Err(Error::Precondition("binomial return law required".into()));
        };
        let UtilityPair::Exponential {
            eta_plus,
            eta_minus,
            zeta,
        } = pref.utility
        else {
            return Err(Error::Precondition(
                "the binomial solver needs exponential utility".into(),
            ));
        };
        if eta_plus != eta_minus {
            return Err(Error::Precondition(
                "the binomial solver needs eta_plus = eta_minus".into(),
            ));
        }
        if let ArbitrageCheck::Fail(v) = market.check_no_arbitrage() {
            return Err(Error::Precondition(format!("no-arbitrage violated: {v}")));
        }
        let (r, lambda) = (*market.r(), *market.lambda());
        let pseudo = pseudo_probabilities(&u, &d, &r, &lambda);
        let zetas = thresholds(&pref.weighting, p, &pseudo);
        Ok(BinomialInputs {
            u,
            d,
            p,
            r,
            lambda,
            pseudo,
            zetas,
            eta: eta_plus,
            zeta,
            reference: (T::one() + r) * x0,
            weighting: pref.weighting,
        })
    }

    fn utility(&self) -> UtilityPair<T> {
        UtilityPair::Exponential {
            eta_plus: self.eta,
            eta_minus: self.eta,
            zeta: self.zeta,
        }
    }

    /// Two-atom Choquet value of the gap `(up, down)` to the reference point.
    fn prospect_of(&self, up: T, down: T) -> T {
        let atoms = [(up, T::one() - self.p), (down, self.p)];
        let u = self.utility();
        let w = self.weighting;
        discrete_gains(&atoms, |x| u.value(Side::Gain, *x), |q| w.value(Side::Gain, *q))
            - discrete_losses(&atoms, |x| u.value(Side::Loss, *x), |q| w.value(Side::Loss, *q))
    }

    /// `(up, down)` state values of `W(theta) - B`.
    pub fn gaps(&self, theta: T) -> (T, T) {
        let one = T::one();
        if theta >= T::zero() {
            let scale = (one - self.lambda) * (self.u - self.d);
            (
                theta * scale * self.pseudo.buy_down,
                -theta * scale * self.pseudo.buy_up,
            )
        } else {
            let spread = self.u - self.d;
            (
                theta * spread * self.pseudo.sell_down,
                -theta * spread * self.pseudo.sell_up,
            )
        }
    }

    /// `J(theta)` from the replication form of the gaps.
    pub fn j(&self, theta: T) -> T {
        let (up, down) = self.gaps(theta);
        self.prospect_of(up, down)
    }

    /// Limit prospect `w+(1-p) - zeta w-(p)` as `theta -> +inf`.
    pub fn j_plus_infinity(&self) -> T {
        let one = T::one();
        self.weighting.value(Side::Gain, one - self.p) - self.zeta * self.weighting.value(Side::Loss, self.p)
    }

    /// Limit prospect `w+(p) - zeta w-(1-p)` as `theta -> -inf`.
    pub fn j_minus_infinity(&self) -> T {
        let one = T::one();
        self.weighting.value(Side::Gain, self.p) - self.zeta * self.weighting.value(Side::Loss, one - self.p)
    }

    /// `theta3`, defined when `pbd > pbu > 0` and `zeta < bar2`.
    pub fn theta3(&self) -> Option<T> {
        let pp = &self.pseudo;
        let bar2 = self.zetas.bar2?;
        if !(pp.buy_down > pp.buy_up && pp.buy_up > T::zero() && self.zeta < bar2) {
            return None;
        }
        let den = self.eta * ((T::one() - self.lambda) * (self.u + self.d) - T::lit(2.0) * (T::one() + self.r));
        Some((bar2 / self.zeta).ln() / den)
    }

    /// `theta4`, defined when `psu > psd > 0` and `zeta < under2`.
    pub fn theta4(&self) -> Option<T> {
        let pp = &self.pseudo;
        let under2 = self.zetas.under2?;
        if !(pp.sell_up > pp.sell_down && pp.sell_down > T::zero() && self.zeta < under2) {
            return None;
        }
        let den = self.eta * (T::lit(2.0) * (T::one() - self.lambda) * (T::one() + self.r) - (self.u + self.d));
        Some(-(under2 / self.zeta).ln() / den)
    }
}

/// `(theta3, theta4)` where their regimes apply.
pub fn candidate_thetas<T: Real>(inputs: &BinomialInputs<T>) -> (Option<T>, Option<T>) {
    (inputs.theta3(), inputs.theta4())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Less,
    Equal,
    Greater,
}

/// `a` against `b` with the relative band; `(order, in_band_but_unequal)`.
fn order<T: Real>(a: T, b: T) -> (Order, bool) {
    let band = T::lit(BAND) * T::one().max(a.abs()).max(b.abs());
    let gap = a - b;
    if gap.abs() <= band {
        (Order::Equal, gap != T::zero())
    } else if gap < T::zero() {
        (Order::Less, false)
    } else {
        (Order::Greater, false)
    }
}

/// Sub-problem on `theta >= 0`.
pub fn solve_buy<T: Real>(inputs: &BinomialInputs<T>) -> Solution<T> {
    let zero = T::zero();
    let pp = &inputs.pseudo;
    let none = |id| Solution::new(Optimum::Finite(zero), id, zero);
    // sign from the numerator, which carries no division error
    if !((T::one() - inputs.lambda) * inputs.u - (T::one() + inputs.r) > zero) {
        return none("T4.1-1a");
    }
    let (shape, b1) = order(pp.buy_down, pp.buy_up);
    match shape {
        Order::Equal => {
            let (z, b2) = order(inputs.zeta, inputs.zetas.bar1);
            let sol = match z {
                Order::Greater => none("T4.1-1b"),
                Order::Equal => Solution::new(
                    Optimum::Interval {
                        lo: zero,
                        hi: T::infinity(),
                    },
                    "T4.1-2",
                    zero,
                ),
                Order::Less => Solution::new(Optimum::PlusInfinity, "T4.1-3a", inputs.j_plus_infinity()),
            };
            sol.flagged(b1 || b2)
        }
        Order::Less => {
            let (z, b2) = order(inputs.zeta, inputs.zetas.bar1);
            let sol = if z == Order::Less {
                Solution::new(Optimum::PlusInfinity, "T4.1-3b", inputs.j_plus_infinity())
            } else {
                none("T4.1-1c")
            };
            sol.flagged(b2)
        }
        Order::Greater => {
            let bar2 = inputs.zetas.bar2.expect("pbu > 0 under no-arbitrage");
            let (z, b2) = order(inputs.zeta, bar2);
            let sol = match (z, inputs.theta3()) {
                (Order::Less, Some(t3)) => Solution::new(Optimum::Finite(t3), "T4.1-4", inputs.j(t3)),
                _ => none("T4.1-1d"),
            };
            sol.flagged(b2)
        }
    }
}

/// Sub-problem on `theta < 0`.
pub fn solve_sell<T: Real>(inputs: &BinomialInputs<T>) -> Solution<T> {
    let zero = T::zero();
    let pp = &inputs.pseudo;
    let none = |id| Solution::new(Optimum::Finite(zero), id, zero);
    if !((T::one() - inputs.lambda) * (T::one() + inputs.r) - inputs.d > zero) {
        return none("T4.2-1a");
    }
    let (shape, b1) = order(pp.sell_up, pp.sell_down);
    match shape {
        Order::Equal => {
            let (z, b2) = order(inputs.zeta, inputs.zetas.under1);
            let sol = match z {
                Order::Greater => none("T4.2-1b"),
                Order::Equal => Solution::new(
                    Optimum::Interval {
                        lo: T::neg_infinity(),
                        hi: zero,
                    },
                    "T4.2-2",
                    zero,
                ),
                Order::Less => Solution::new(Optimum::MinusInfinity, "T4.2-3a", inputs.j_minus_infinity()),
            };
            sol.flagged(b1 || b2)
        }
        Order::Less => {
            let (z, b2) = order(inputs.zeta, inputs.zetas.under1);
            let sol = if z == Order::Less {
                Solution::new(Optimum::MinusInfinity, "T4.2-3b", inputs.j_minus_infinity())
            } else {
                none("T4.2-1c")
            };
            sol.flagged(b2)
        }
        Order::Greater => {
            let under2 = inputs.zetas.under2.expect("psd > 0 under no-arbitrage");
            let (z, b2) = order(inputs.zeta, under2);
            let sol = match (z, inputs.theta4()) {
                (Order::Less, Some(t4)) => Solution::new(Optimum::Finite(t4), "T4.2-4", inputs.j(t4)),
                _ => none("T4.2-1d"),
            };
            sol.flagged(b2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Menu {
    Zero,
    Interval,
    Unbounded,
    Interior,
}

fn menu<T: Real>(s: &Solution<T>) -> Menu {
    match s.optimum {
        Optimum::Finite(t) if t == T::zero() => Menu::Zero,
        Optimum::Finite(_) => Menu::Interior,
        Optimum::Interval { .. } => Menu::Interval,
        _ => Menu::Unbounded,
    }
}

/// Merges the buy and sell sub-problems by their optimal prospects.
pub fn merge<T: Real>(buy: &Solution<T>, sell: &Solution<T>) -> Solution<T> {
    use Menu::*;
    let zero = T::zero();
    let boundary = buy.boundary || sell.boundary;
    let relabel = |s: &Solution<T>, id| Solution { case_id: id, ..*s };
    // `buy_wins`: the buy value is at least the sell value, ties within the band
    let pick = |finite_first: Option<bool>| {
        let (o, band) = order(buy.prospect, sell.prospect);
        let tie = o == Order::Equal;
        let buy_wins = match (tie, finite_first) {
            (true, Some(buy_is_finite)) => buy_is_finite,
            (true, None) => true,
            _ => o == Order::Greater,
        };
        (buy_wins, tie || band)
    };
    let sol = match (menu(buy), menu(sell)) {
        (Zero, Zero) => Solution::new(Optimum::Finite(zero), "T4.3-1", zero),
        (Zero, Interval) => Solution::new(
            Optimum::Interval {
                lo: T::neg_infinity(),
                hi: zero,
            },
            "T4.3-5",
            zero,
        ),
        (Interval, Zero) => relabel(buy, "T4.3-4"),
        (Interval, Interval) => Solution::new(
            Optimum::Interval {
                lo: T::neg_infinity(),
                hi: T::infinity(),
            },
            "T4.3-6",
            zero,
        ),
        (Interior, Zero | Interval) => relabel(buy, "T4.3-2a"),
        (Zero | Interval, Interior) => relabel(sell, "T4.3-3a"),
        (Unbounded, Zero | Interval) => relabel(buy, "T4.3-7a"),
        (Zero | Interval, Unbounded) => relabel(sell, "T4.3-8a"),
        (Unbounded, Unbounded) => {
            let (buy_wins, tie) = pick(None);
            if buy_wins {
                relabel(buy, "T4.3-7b").flagged(tie)
            } else {
                relabel(sell, "T4.3-8b").flagged(tie)
            }
        }
        (Unbounded, Interior) => {
            let (buy_wins, tie) = pick(Some(false));
            if buy_wins {
                relabel(buy, "T4.3-7c").flagged(tie)
            } else {
                relabel(sell, "T4.3-3b").flagged(tie)
            }
        }
        (Interior, Unbounded) => {
            let (buy_wins, tie) = pick(Some(true));
            if buy_wins {
                relabel(buy, "T4.3-2b").flagged(tie)
            } else {
                relabel(sell, "T4.3-8c").flagged(tie)
            }
        }
        (Interior, Interior) => {
            let (buy_wins, tie) = pick(None);
            if buy_wins {
                relabel(buy, "T4.3-2c").flagged(tie)
            } else {
                relabel(sell, "T4.3-3c").flagged(tie)
            }
        }
    };
    sol.flagged(boundary)
}

/// Optimal investment for an investor holding only `x0` in cash.
pub fn solve_binomial<T: Real>(x0: T, market: &MarketModel<T>, pref: &CptPreference<T>) -> Result<Solution<T>> {
    Ok(analyze_binomial(x0, market, pref)?.solution)
}

/// Inputs, sub-solutions and the merged optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialAnalysis<T> {
    pub inputs: BinomialInputs<T>,
    pub lambda_bar: T,
    pub theta3: Option<T>,
    pub theta4: Option<T>,
    pub buy: Solution<T>,
    pub sell: Solution<T>,
    pub solution: Solution<T>,
}

pub fn analyze_binomial<T: Real>(
    x0: T,
    market: &MarketModel<T>,
    pref: &CptPreference<T>,
) -> Result<BinomialAnalysis<T>> {
    let inputs = BinomialInputs::from_market(x0, market, pref)?;
    let buy = solve_buy(&inputs);
    let sell = solve_sell(&inputs);
    Ok(BinomialAnalysis {
        lambda_bar: lambda_bar(&inputs.u, &inputs.d, &inputs.r),
        theta3: inputs.theta3(),
        theta4: inputs.theta4(),
        solution: merge(&buy, &sell),
        buy,
        sell,
        inputs,
    })
}
