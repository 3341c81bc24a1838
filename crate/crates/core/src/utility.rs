//! S-shaped utility pairs.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Gains or losses branch of a preference component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Gain,
    Loss,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Gain => "gains",
            Side::Loss => "losses",
        }
    }
}

/// `u+` on gains and `u-` on losses, both starting at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityPair<T> {
    /// `u+(x) = x^alpha`, `u-(x) = k x^beta`.
    Power { alpha: T, beta: T, k: T },
    /// `u+(x) = 1 - exp(-eta_plus x)`, `u-(x) = zeta (1 - exp(-eta_minus x))`.
    Exponential { eta_plus: T, eta_minus: T, zeta: T },
}

impl<T: Real> UtilityPair<T> {
    pub fn power(alpha: T, beta: T, k: T) -> Result<Self> {
        let u = UtilityPair::Power { alpha, beta, k };
        u.validate()?;
        Ok(u)
    }

    pub fn exponential(eta_plus: T, eta_minus: T, zeta: T) -> Result<Self> {
        let u = UtilityPair::Exponential {
            eta_plus,
            eta_minus,
            zeta,
        };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        let (zero, one) = (T::zero(), T::one());
        match *self {
            UtilityPair::Power { alpha, beta, k } => {
                if !(alpha > zero && alpha <= one) {
                    return Err(invalid("alpha", "must lie in (0, 1]"));
                }
                if !(beta > zero && beta <= one) {
                    return Err(invalid("beta", "must lie in (0, 1]"));
                }
                if !(alpha <= beta) {
                    return Err(invalid("alpha", "must not exceed beta"));
                }
                if !(k > one && k.is_finite()) {
                    return Err(invalid("k", "must be > 1"));
                }
            }
            UtilityPair::Exponential {
                eta_plus,
                eta_minus,
                zeta,
            } => {
                if !(eta_plus > zero && eta_plus.is_finite()) {
                    return Err(invalid("eta_plus", "must be > 0"));
                }
                if !(eta_minus > zero && eta_minus.is_finite()) {
                    return Err(invalid("eta_minus", "must be > 0"));
                }
                if !(zeta > one && zeta.is_finite()) {
                    return Err(invalid("zeta", "must be > 1"));
                }
            }
        }
        Ok(())
    }

    /// `u+(x)` or `u-(x)`; negative `x` is rejected.
    pub fn eval(&self, side: Side, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(Error::Domain(format!("utility argument {x} must be >= 0")));
        }
        Ok(self.value(side, x))
    }

    /// Unchecked evaluation for `x >= 0`.
    #[inline]
    pub fn value(&self, side: Side, x: T) -> T {
        match (*self, side) {
            (UtilityPair::Power { alpha, .. }, Side::Gain) => x.powf(alpha),
            (UtilityPair::Power { beta, k, .. }, Side::Loss) => k * x.powf(beta),
            (UtilityPair::Exponential { eta_plus, .. }, Side::Gain) => -(-eta_plus * x).exp_m1(),
            (UtilityPair::Exponential { eta_minus, zeta, .. }, Side::Loss) => -zeta * (-eta_minus * x).exp_m1(),
        }
    }

    /// Supremum of the branch: `+inf` for power, `1` or `zeta` for exponential.
    pub fn bound(&self, side: Side) -> T {
        match (*self, side) {
            (UtilityPair::Power { .. }, _) => T::infinity(),
            (UtilityPair::Exponential { .. }, Side::Gain) => T::one(),
            (UtilityPair::Exponential { zeta, .. }, Side::Loss) => zeta,
        }
    }
}
