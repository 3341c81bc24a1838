//! Prospect values of signed distributions.
//!
//! Continuous laws are integrated in the probability (quantile) domain:
//! `V+ = int_0^{P(X>0)} u+(Qbar(q)) w+'(q) dq` and
//! `V- = int_0^{P(X<=0)} u-(-Q(q)) w-'(q) dq`, with `Qbar` the inverse survival
//! function. Discrete laws use exact rank-dependent sums.

use crate::distribution::{ReturnLaw, SignedDistribution};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_pieces, Integral, Tolerance};
use crate::scalar::{Field, Real};
use crate::utility::{Side, UtilityPair};
use crate::weighting::{Substitution, WeightingPair};

/// Utility and weighting pairs; the reference point lives with the market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptPreference<T> {
    pub utility: UtilityPair<T>,
    pub weighting: WeightingPair<T>,
}

impl<T: Real> CptPreference<T> {
    pub fn new(utility: UtilityPair<T>, weighting: WeightingPair<T>) -> Result<Self> {
        utility.validate()?;
        weighting.validate()?;
        Ok(CptPreference { utility, weighting })
    }

    pub fn validate(&self) -> Result<()> {
        self.utility.validate()?;
        self.weighting.validate()
    }
}

/// Gains part, losses part and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProspectBreakdown<T> {
    pub v_plus: T,
    pub v_minus: T,
    pub total: T,
    pub plus_finite: bool,
    pub minus_finite: bool,
    /// Summed quadrature error estimate of both parts (0 for discrete laws).
    pub error: T,
}

impl<T: Real> ProspectBreakdown<T> {
    fn new(plus: Integral<T>, minus: Integral<T>) -> Self {
        ProspectBreakdown {
            v_plus: plus.value,
            v_minus: minus.value,
            total: plus.value - minus.value,
            plus_finite: plus.value.is_finite(),
            minus_finite: minus.value.is_finite(),
            error: plus.error + minus.error,
        }
    }
}

/// Which tail of `X` a one-sided integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// `int_0^inf w(P(X > z)) du(z)`.
    Upper,
    /// `int_0^inf w(P(X < -z)) du(z)`.
    Lower,
}

/// Outcome of the sufficient finiteness conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite,
    Unverified,
}

/// Sufficient conditions for finite prospect values of every `W(theta) - B`.
///
/// Bounded laws and bounded (exponential) utilities are always finite. For
/// unbounded laws with power utility the weighting tails must beat the
/// utility growth: normal tails beat every weighting here; lognormal tails
/// need `gamma > 1/2` under Prelec; Student-t tails are polynomial and need
/// `nu * min(gamma, delta) > beta` under Tversky-Kahneman (Prelec weights
/// decay slower than any power, so they are never certified).
pub fn check_finiteness<T: Real>(pref: &CptPreference<T>, law: &ReturnLaw<T>) -> Finiteness {
    if law.is_discrete() || matches!(pref.utility, UtilityPair::Exponential { .. }) {
        return Finiteness::Finite;
    }
    let UtilityPair::Power { beta, .. } = pref.utility else {
        unreachable!("exponential handled above")
    };
    let certified = match (law, pref.weighting) {
        (_, w) if w.singularity_order().is_none() => false,
        (ReturnLaw::Normal { .. }, _) => true,
        (ReturnLaw::Lognormal { .. }, WeightingPair::Prelec { gamma, .. }) => gamma > T::lit(0.5),
        (ReturnLaw::Lognormal { .. }, _) => true,
        (ReturnLaw::StudentT { nu, .. }, WeightingPair::TverskyKahneman { gamma, delta }) => {
            *nu * gamma.min(delta) > beta
        }
        (ReturnLaw::StudentT { nu, .. }, WeightingPair::Identity) => *nu > beta,
        _ => false,
    };
    if certified {
        Finiteness::Finite
    } else {
        Finiteness::Unverified
    }
}

/// `V+`, `V-` and `V = V+ - V-` of `dist` with the default tolerance.
pub fn prospect_value<T: Real>(pref: &CptPreference<T>, dist: &SignedDistribution<T>) -> Result<ProspectBreakdown<T>> {
    prospect_value_with(pref, dist, &Tolerance::default())
}

pub fn prospect_value_with<T: Real>(
    pref: &CptPreference<T>,
    dist: &SignedDistribution<T>,
    tol: &Tolerance,
) -> Result<ProspectBreakdown<T>> {
    let u = pref.utility;
    let plus = tail_integral(
        dist,
        Tail::Upper,
        &pref.weighting,
        Side::Gain,
        |x| u.value(Side::Gain, x),
        tol,
    )?;
    let minus = tail_integral(
        dist,
        Tail::Lower,
        &pref.weighting,
        Side::Loss,
        |x| u.value(Side::Loss, x),
        tol,
    )?;
    Ok(ProspectBreakdown::new(plus, minus))
}

/// One-sided Choquet integral of `util` against the weighted tail of `dist`;
/// `side` selects which member of the weighting pair applies.
pub fn tail_integral<T: Real, U: Fn(T) -> T>(
    dist: &SignedDistribution<T>,
    tail: Tail,
    weighting: &WeightingPair<T>,
    side: Side,
    util: U,
    tol: &Tolerance,
) -> Result<Integral<T>> {
    let w = |q: &T| weighting.value(side, *q);
    if let Some(atoms) = dist.atoms() {
        let value = match tail {
            Tail::Upper => discrete_gains(atoms, |x| util(*x), w),
            Tail::Lower => discrete_losses(atoms, |x| util(*x), w),
        };
        return Ok(Integral {
            value,
            error: T::zero(),
            panels: 0,
        });
    }
    let zero = T::zero();
    let (mass, magnitude): (T, Box<dyn Fn(T) -> T + '_>) = match tail {
        Tail::Upper => (dist.sf(zero), Box::new(|q| dist.upper_quantile(q))),
        Tail::Lower => (dist.cdf(zero), Box::new(|q| -dist.quantile(q))),
    };
    if !(mass > zero) {
        return Ok(Integral::zero());
    }
    let tiny = T::min_positive_value();
    let at = |q: T| util(magnitude(q.max(tiny)).max(zero));
    let outcome = match weighting.substitution(side) {
        Substitution::Power(m) => {
            // q = t^m near 0 and q = mass - t^m near mass
            let half = mass * T::lit(0.5);
            let h = half.powf(m.recip());
            let g = |q: T, qc: T| {
                let v = at(q);
                if v == zero {
                    zero
                } else {
                    v * weighting.derivative_split(side, q.max(tiny), qc)
                }
            };
            let integrand = |t: T| {
                let tm = t.powf(m);
                let jac = m * t.powf(m - T::one());
                let low = g(tm, T::one() - tm);
                let high = g(mass - tm, (T::one() - mass) + tm);
                jac * (low + high)
            };
            integrate_pieces(&integrand, &[zero, h * T::lit(0.25), h], tol)
        }
        Substitution::WeightSpace => {
            let top = weighting.value(side, mass);
            let integrand = |s: T| {
                let q = weighting.inverse(side, s).expect("closed-form inverse");
                at(q.min(mass))
            };
            integrate_pieces(&integrand, &[zero, top * T::lit(0.5), top], tol)
        }
    };
    outcome.map_err(|r| Error::Divergence {
        side: side.name(),
        estimate: r.value.as_f64(),
        error: r.error.as_f64(),
        panels: r.panels,
    })
}

fn sorted<T: Field>(atoms: &[(T, T)]) -> Vec<(T, T)> {
    let mut v = atoms.to_vec();
    v.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable atoms"));
    v
}

/// `sum_i u(x_i) [w(P(X >= x_i)) - w(P(X > x_i))]` over atoms `x_i > 0`.
pub fn discrete_gains<T: Field>(atoms: &[(T, T)], u: impl Fn(&T) -> T, w: impl Fn(&T) -> T) -> T {
    let atoms = sorted(atoms);
    let mut above = T::zero();
    let mut total = T::zero();
    for (x, p) in atoms.iter().rev() {
        if *x <= T::zero() {
            break;
        }
        let at_or_above = above.clone() + p.clone();
        total = total + u(x) * (w(&at_or_above) - w(&above));
        above = at_or_above;
    }
    total
}

/// `sum_i u(-x_i) [w(P(X <= x_i)) - w(P(X < x_i))]` over atoms `x_i < 0`.
pub fn discrete_losses<T: Field>(atoms: &[(T, T)], u: impl Fn(&T) -> T, w: impl Fn(&T) -> T) -> T {
    let atoms = sorted(atoms);
    let mut below = T::zero();
    let mut total = T::zero();
    for (x, p) in atoms.iter() {
        if *x >= T::zero() {
            break;
        }
        let at_or_below = below.clone() + p.clone();
        total = total + u(&-x.clone()) * (w(&at_or_below) - w(&below));
        below = at_or_below;
    }
    total
}

/// Gains as layers: `sum_j w(P(X >= x_j)) (u(x_j) - u(x_{j-1}))` over the
/// positive atoms in ascending order, with `x_0 = 0`.
pub fn discrete_gains_layered<T: Field>(atoms: &[(T, T)], u: impl Fn(&T) -> T, w: impl Fn(&T) -> T) -> T {
    let atoms = sorted(atoms);
    let mut total = T::zero();
    let mut prev = T::zero();
    for (j, (x, _)) in atoms.iter().enumerate() {
        if *x <= T::zero() {
            continue;
        }
        let tail = atoms[j..].iter().fold(T::zero(), |acc, a| acc + a.1.clone());
        let ux = u(x);
        total = total + w(&tail) * (ux.clone() - prev);
        prev = ux;
    }
    total
}

/// Losses as layers: `sum_j w(P(X <= -y_j)) (u(y_j) - u(y_{j-1}))` over the
/// loss magnitudes `y_j` in ascending order, with `y_0 = 0`.
pub fn discrete_losses_layered<T: Field>(atoms: &[(T, T)], u: impl Fn(&T) -> T, w: impl Fn(&T) -> T) -> T {
    let atoms = sorted(atoms);
    let mut total = T::zero();
    let mut prev = T::zero();
    for j in (0..atoms.len()).rev() {
        let x = &atoms[j].0;
        if *x >= T::zero() {
            continue;
        }
        let tail = atoms[..=j].iter().fold(T::zero(), |acc, a| acc + a.1.clone());
        let uy = u(&-x.clone());
        total = total + w(&tail) * (uy.clone() - prev);
        prev = uy;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::ReturnLaw;
    use statrs::function::gamma::gamma;

    fn power_tk() -> CptPreference<f64> {
        CptPreference::new(
            UtilityPair::power(0.88, 0.88, 2.25).unwrap(),
            WeightingPair::tversky_kahneman(0.61, 0.69).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_prospect_is_zero() {
        let v = prospect_value(&power_tk(), &SignedDistribution::constant(0.0)).unwrap();
        assert_eq!((v.v_plus, v.v_minus, v.total), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_point_law_is_single_atom_sums() {
        let pref = power_tk();
        let p = 0.3;
        let d = SignedDistribution::discrete(vec![(1.0, 1.0 - p), (-1.0, p)]).unwrap();
        let v = prospect_value(&pref, &d).unwrap();
        let w = pref.weighting;
        let expected = w.value(Side::Gain, 1.0 - p) - w.value(Side::Loss, p) * 2.25;
        assert!((v.total - expected).abs() < 1e-15);
    }

    #[test]
    fn identity_weighting_matches_normal_moments() {
        let (alpha, beta, k) = (0.7, 0.9, 2.0);
        let pref = CptPreference::new(UtilityPair::power(alpha, beta, k).unwrap(), WeightingPair::Identity).unwrap();
        // standard normal gross return: E[X+^a] = 2^{a/2} Gamma((a+1)/2) / (2 sqrt(pi))
        let law = ReturnLaw::normal(-1.0, 1.0).unwrap();
        let d = SignedDistribution::affine(&law, 0.0, 1.0);
        let v = prospect_value(&pref, &d).unwrap();
        let m = |a: f64| 2f64.powf(a / 2.0) * gamma((a + 1.0) / 2.0) / (2.0 * std::f64::consts::PI.sqrt());
        assert!((v.v_plus - m(alpha)).abs() < 1e-8, "{v:?}");
        assert!((v.v_minus - k * m(beta)).abs() < 1e-8, "{v:?}");
    }

    #[test]
    fn finiteness_rules() {
        let pref = power_tk();
        let ln = ReturnLaw::lognormal(0.0, 0.2).unwrap();
        assert_eq!(check_finiteness(&pref, &ln), Finiteness::Finite);
        let bin = ReturnLaw::binomial(1.2, 0.9, 0.5).unwrap();
        assert_eq!(check_finiteness(&pref, &bin), Finiteness::Finite);
        let expo = CptPreference::new(
            UtilityPair::exponential(1.0, 1.0, 2.0).unwrap(),
            WeightingPair::prelec(0.3, 1.0, 1.0).unwrap(),
        )
        .unwrap();
        let cauchy = ReturnLaw::student_t(1.0, 0.0, 0.1).unwrap();
        assert_eq!(check_finiteness(&expo, &cauchy), Finiteness::Finite);
        assert_eq!(check_finiteness(&pref, &cauchy), Finiteness::Unverified);
        let t5 = ReturnLaw::student_t(5.0, 0.0, 0.1).unwrap();
        assert_eq!(check_finiteness(&pref, &t5), Finiteness::Finite);
    }
}
