//! Single-period market with proportional transaction costs.

use std::fmt;

use crate::distribution::{ReturnLaw, SignedDistribution};
use crate::error::{invalid, Result};
use crate::scalar::{neg_part, pos_part, Field, Real};

/// Initial holdings: `x0` in the riskless asset, `y0` in the risky asset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Portfolio<T> {
    pub x0: T,
    pub y0: T,
}

impl<T> Portfolio<T> {
    pub fn new(x0: T, y0: T) -> Self {
        Portfolio { x0, y0 }
    }
}

/// Riskless rate `r`, cost rate `lambda` and the law of the gross return.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketModel<T> {
    r: T,
    lambda: T,
    returns: ReturnLaw<T>,
}

/// Which affine excess transform of the return to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Excess {
    /// `(1 - lambda)(1 + R) - (1 + r)`: excess of a unit bought now and sold later.
    Z1,
    /// `(1 - lambda)(R - r)`: excess of a unit of the initial holding sold now.
    Z2,
    /// `1 + R - (1 - lambda)(1 + r)`: excess of a unit shorted now.
    Z3,
}

/// Which inequality of the no-arbitrage condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArbitrageViolation {
    /// `P((1 - lambda)(1 + R) < 1 + r) = 0`: buying dominates the bond.
    BuyDominates,
    /// `P(1 + R > (1 - lambda)(1 + r)) = 0`: shorting dominates the stock.
    ShortDominates,
    /// `(1 - lambda)(1 + R) = 1 + r` almost surely.
    DegenerateBuy,
    /// `1 + R = (1 - lambda)(1 + r)` almost surely.
    DegenerateShort,
}

impl fmt::Display for ArbitrageViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArbitrageViolation::BuyDominates => "P((1-lambda)(1+R) < 1+r) = 0",
            ArbitrageViolation::ShortDominates => "P(1+R > (1-lambda)(1+r)) = 0",
            ArbitrageViolation::DegenerateBuy => "(1-lambda)(1+R) = 1+r almost surely",
            ArbitrageViolation::DegenerateShort => "1+R = (1-lambda)(1+r) almost surely",
        };
        f.write_str(s)
    }
}

/// Outcome of the no-arbitrage check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArbitrageCheck {
    Pass,
    Fail(ArbitrageViolation),
}

impl ArbitrageCheck {
    pub fn passed(&self) -> bool {
        matches!(self, ArbitrageCheck::Pass)
    }
}

impl fmt::Display for ArbitrageCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArbitrageCheck::Pass => f.write_str("pass"),
            ArbitrageCheck::Fail(v) => write!(f, "fail: {v}"),
        }
    }
}

/// Probabilities of the loss sets `{Z1 < 0}`, `{Z2 > 0}`, `{Z3 > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSets<T> {
    pub buy: T,
    pub sell: T,
    pub short: T,
}

impl<T: Field> MarketModel<T> {
    /// Validates `r >= 0`, `0 <= lambda < 1` and the return-law parameters.
    /// No-arbitrage is checked separately by [`MarketModel::check_no_arbitrage`].
    pub fn new(r: T, lambda: T, returns: ReturnLaw<T>) -> Result<Self> {
        if !(r >= T::zero()) {
            return Err(invalid("r", "must be >= 0"));
        }
        if !(lambda >= T::zero() && lambda < T::one()) {
            return Err(invalid("lambda", "must lie in [0, 1)"));
        }
        returns.validate()?;
        Ok(MarketModel { r, lambda, returns })
    }

    pub fn r(&self) -> &T {
        &self.r
    }

    pub fn lambda(&self) -> &T {
        &self.lambda
    }

    pub fn returns(&self) -> &ReturnLaw<T> {
        &self.returns
    }

    /// Same market with a different cost rate.
    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        MarketModel::new(self.r.clone(), lambda, self.returns.clone())
    }

    /// Terminal wealth after buying `theta` (selling if negative) of the risky
    /// asset at time 0, on the path where the gross return is `gross`.
    pub fn terminal_wealth(&self, p: &Portfolio<T>, theta: &T, gross: &T) -> T {
        terminal_wealth(p, &self.r, &self.lambda, theta, gross)
    }

    /// Terminal wealth of the doing-nothing strategy on the given path.
    pub fn reference_wealth(&self, p: &Portfolio<T>, gross: &T) -> T {
        let one = T::one();
        (one + self.r.clone()) * p.x0.clone() + gross.clone() * (p.y0.clone() - self.lambda.clone() * pos_part(&p.y0))
    }

    /// Binomial form of the no-arbitrage condition, evaluated exactly.
    pub fn binomial_no_arbitrage(u: &T, d: &T, r: &T, lambda: &T) -> ArbitrageCheck {
        let one = T::one();
        let keep = one.clone() - lambda.clone();
        let bond = one + r.clone();
        let mid = keep.clone() * bond;
        if !(u.clone() > mid) {
            return ArbitrageCheck::Fail(ArbitrageViolation::ShortDominates);
        }
        if !(mid > keep.clone() * keep * d.clone()) {
            return ArbitrageCheck::Fail(ArbitrageViolation::BuyDominates);
        }
        ArbitrageCheck::Pass
    }
}

/// `(1+r)(x0-theta) + G(y0+theta) - lambda[G(y0+theta)^+ + (1+r)theta^-]`
/// with `G` the realised gross return.
pub fn terminal_wealth<T: Field>(p: &Portfolio<T>, r: &T, lambda: &T, theta: &T, gross: &T) -> T {
    let bond = T::one() + r.clone();
    let stock = gross.clone() * (p.y0.clone() + theta.clone());
    bond.clone() * (p.x0.clone() - theta.clone()) + stock.clone()
        - lambda.clone() * (pos_part(&stock) + bond * neg_part(theta))
}

impl<T: Real> MarketModel<T> {
    /// Law of the doing-nothing terminal wealth.
    pub fn reference_point(&self, p: &Portfolio<T>) -> SignedDistribution<T> {
        let shift = (T::one() + self.r) * p.x0;
        let scale = p.y0 - self.lambda * p.y0.max(T::zero());
        SignedDistribution::affine(&self.returns, shift, scale)
    }

    /// Law of the requested excess transform.
    pub fn excess_transform(&self, which: Excess) -> SignedDistribution<T> {
        let (shift, scale) = self.excess_coefficients(which);
        SignedDistribution::affine(&self.returns, shift, scale)
    }

    /// `(shift, scale)` with `Z = shift + scale * (1 + R)`.
    pub fn excess_coefficients(&self, which: Excess) -> (T, T) {
        let one = T::one();
        let keep = one - self.lambda;
        let bond = one + self.r;
        match which {
            Excess::Z1 => (-bond, keep),
            Excess::Z2 => (-keep * bond, keep),
            Excess::Z3 => (-keep * bond, one),
        }
    }

    pub fn loss_set_probabilities(&self) -> LossSets<T> {
        LossSets {
            buy: self.excess_transform(Excess::Z1).cdf_strict(T::zero()),
            sell: self.excess_transform(Excess::Z2).sf(T::zero()),
            short: self.excess_transform(Excess::Z3).sf(T::zero()),
        }
    }

    pub fn check_no_arbitrage(&self) -> ArbitrageCheck {
        if let ReturnLaw::Binomial { u, d, .. } = &self.returns {
            return Self::binomial_no_arbitrage(u, d, &self.r, &self.lambda);
        }
        let keep = T::one() - self.lambda;
        let bond = T::one() + self.r;
        if let Some(g) = self.returns.constant_value() {
            let tol = T::lit(1e-12);
            let close = |a: T, b: T| (a - b).abs() <= tol * a.abs().max(b.abs());
            if close(keep * g, bond) {
                return ArbitrageCheck::Fail(ArbitrageViolation::DegenerateBuy);
            }
            if close(g, keep * bond) {
                return ArbitrageCheck::Fail(ArbitrageViolation::DegenerateShort);
            }
        }
        let sets = self.loss_set_probabilities();
        if !(sets.buy > T::zero()) {
            return ArbitrageCheck::Fail(ArbitrageViolation::BuyDominates);
        }
        if !(sets.short > T::zero()) {
            return ArbitrageCheck::Fail(ArbitrageViolation::ShortDominates);
        }
        ArbitrageCheck::Pass
    }
}
