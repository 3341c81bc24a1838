//! Probability weighting functions.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;
use crate::utility::Side;

/// Smallest parameter for which the Tversky-Kahneman form is increasing.
pub const TK_MIN_PARAMETER: f64 = 0.28;

/// `w+` on gains and `w-` on losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightingPair<T> {
    /// `w(q) = q^c / (q^c + (1-q)^c)^(1/c)` with `c = gamma` on gains and
    /// `c = delta` on losses.
    TverskyKahneman {
        gamma: T,
        delta: T,
    },
    /// `w(q) = exp(-delta_side (-ln q)^gamma)`.
    Prelec {
        gamma: T,
        delta_plus: T,
        delta_minus: T,
    },
    Identity,
}

/// How the quantile-domain integral handles the endpoint behaviour of `w'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Substitution<T> {
    /// Integrate over `q = t^m` near each end of the probability range.
    Power(T),
    /// Integrate in weight space through the closed-form inverse.
    WeightSpace,
}

impl<T: Real> WeightingPair<T> {
    pub fn tversky_kahneman(gamma: T, delta: T) -> Result<Self> {
        let w = WeightingPair::TverskyKahneman { gamma, delta };
        w.validate()?;
        Ok(w)
    }

    pub fn prelec(gamma: T, delta_plus: T, delta_minus: T) -> Result<Self> {
        let w = WeightingPair::Prelec {
            gamma,
            delta_plus,
            delta_minus,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            WeightingPair::TverskyKahneman { gamma, delta } => {
                let floor = T::lit(TK_MIN_PARAMETER);
                if !(gamma >= floor && gamma.is_finite()) {
                    return Err(invalid("gamma", "must be >= 0.28"));
                }
                if !(delta >= floor && delta.is_finite()) {
                    return Err(invalid("delta", "must be >= 0.28"));
                }
            }
            WeightingPair::Prelec {
                gamma,
                delta_plus,
                delta_minus,
            } => {
                if !(gamma > T::zero() && gamma < T::one()) {
                    return Err(invalid("gamma", "must lie in (0, 1)"));
                }
                if !(delta_plus > T::zero() && delta_plus.is_finite()) {
                    return Err(invalid("delta_plus", "must be > 0"));
                }
                if !(delta_minus > T::zero() && delta_minus.is_finite()) {
                    return Err(invalid("delta_minus", "must be > 0"));
                }
            }
            WeightingPair::Identity => {}
        }
        Ok(())
    }

    /// Checked evaluation on `[0, 1]`.
    pub fn eval(&self, side: Side, q: T) -> Result<T> {
        if !(q >= T::zero() && q <= T::one()) {
            return Err(Error::Domain(format!("weighting argument {q} outside [0, 1]")));
        }
        Ok(self.value(side, q))
    }

    /// Evaluation with exact endpoints; `q` is clamped into `[0, 1]`.
    pub fn value(&self, side: Side, q: T) -> T {
        let (zero, one) = (T::zero(), T::one());
        if q <= zero {
            return zero;
        }
        if q >= one {
            return one;
        }
        match *self {
            WeightingPair::TverskyKahneman { gamma, delta } => {
                let c = pick(side, gamma, delta);
                tk(q, one - q, c)
            }
            WeightingPair::Prelec {
                gamma,
                delta_plus,
                delta_minus,
            } => {
                let d = pick(side, delta_plus, delta_minus);
                (-d * (-q.ln()).powf(gamma)).exp()
            }
            WeightingPair::Identity => q,
        }
    }

    /// Analytic `w'(q)` for `q` in the open unit interval.
    pub fn derivative(&self, side: Side, q: T) -> Result<T> {
        if !(q > T::zero() && q < T::one()) {
            return Err(Error::Domain(format!("weighting derivative needs 0 < q < 1, got {q}")));
        }
        Ok(self.derivative_split(side, q, T::one() - q))
    }

    /// `w'(q)` with `1 - q` supplied separately so that arguments close to 1
    /// keep their relative precision.
    pub(crate) fn derivative_split(&self, side: Side, q: T, qc: T) -> T {
        match *self {
            WeightingPair::TverskyKahneman { gamma, delta } => {
                let c = pick(side, gamma, delta);
                let a = q.powf(c) + qc.powf(c);
                let w = q.powf(c) / a.powf(c.recip());
                w * (c / q - (q.powf(c - T::one()) - qc.powf(c - T::one())) / a)
            }
            WeightingPair::Prelec {
                gamma,
                delta_plus,
                delta_minus,
            } => {
                let d = pick(side, delta_plus, delta_minus);
                let l = if qc < T::lit(0.5) { -(-qc).ln_1p() } else { -q.ln() };
                let w = (-d * l.powf(gamma)).exp();
                w * d * gamma * l.powf(gamma - T::one()) / q
            }
            WeightingPair::Identity => T::one(),
        }
    }

    /// Closed-form inverse where one exists (Prelec, Identity).
    pub fn inverse(&self, side: Side, s: T) -> Option<T> {
        let (zero, one) = (T::zero(), T::one());
        if s <= zero {
            return Some(zero);
        }
        if s >= one {
            return Some(one);
        }
        match *self {
            WeightingPair::Prelec {
                gamma,
                delta_plus,
                delta_minus,
            } => {
                let d = pick(side, delta_plus, delta_minus);
                Some((-((-s.ln()) / d).powf(gamma.recip())).exp())
            }
            WeightingPair::Identity => Some(s),
            WeightingPair::TverskyKahneman { .. } => None,
        }
    }

    /// Exponent `epsilon` with `w'(q) = O(q^-epsilon)` at both ends, if one
    /// below 1 exists for both sides.
    pub fn singularity_order(&self) -> Option<T> {
        match *self {
            WeightingPair::TverskyKahneman { gamma, delta } => {
                let e = T::one() - gamma.min(delta);
                (e < T::one()).then_some(e.max(T::zero()))
            }
            // sub-polynomial blow-up: any positive epsilon works
            WeightingPair::Prelec { .. } => Some(T::lit(0.5)),
            WeightingPair::Identity => Some(T::zero()),
        }
    }

    pub(crate) fn substitution(&self, side: Side) -> Substitution<T> {
        match *self {
            WeightingPair::TverskyKahneman { gamma, delta } => {
                let c = pick(side, gamma, delta).min(T::one());
                Substitution::Power(c.recip())
            }
            WeightingPair::Prelec { .. } => Substitution::WeightSpace,
            WeightingPair::Identity => Substitution::Power(T::lit(2.0)),
        }
    }
}

#[inline]
fn pick<T>(side: Side, gain: T, loss: T) -> T {
    match side {
        Side::Gain => gain,
        Side::Loss => loss,
    }
}

fn tk<T: Real>(q: T, qc: T, c: T) -> T {
    let a = q.powf(c);
    a / (a + qc.powf(c)).powf(c.recip())
}
