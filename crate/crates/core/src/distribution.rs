//! Laws of the gross return `1 + R` and of affine transforms of it.

use crate::error::{invalid, Result};
use crate::scalar::{Field, Real};
use crate::special;

/// Law of the gross return `1 + R` over one period.
#[derive(Debug, Clone, PartialEq)]
pub enum ReturnLaw<T> {
    /// `ln(1 + R) ~ N(mu, sigma^2)`.
    Lognormal { mu: T, sigma: T },
    /// `R ~ N(mu, sigma^2)`.
    Normal { mu: T, sigma: T },
    /// `R = loc + scale * t_nu`.
    StudentT { nu: T, loc: T, scale: T },
    /// `1 + R = u` with probability `1 - p`, `d` with probability `p`.
    Binomial { u: T, d: T, p: T },
    /// Equally weighted sample of gross returns, kept sorted ascending.
    Empirical(Vec<T>),
}

impl<T: Field> ReturnLaw<T> {
    pub fn lognormal(mu: T, sigma: T) -> Result<Self> {
        let law = ReturnLaw::Lognormal { mu, sigma };
        law.validate()?;
        Ok(law)
    }

    pub fn normal(mu: T, sigma: T) -> Result<Self> {
        let law = ReturnLaw::Normal { mu, sigma };
        law.validate()?;
        Ok(law)
    }

    pub fn student_t(nu: T, loc: T, scale: T) -> Result<Self> {
        let law = ReturnLaw::StudentT { nu, loc, scale };
        law.validate()?;
        Ok(law)
    }

    pub fn binomial(u: T, d: T, p: T) -> Result<Self> {
        let law = ReturnLaw::Binomial { u, d, p };
        law.validate()?;
        Ok(law)
    }

    pub fn empirical(mut sample: Vec<T>) -> Result<Self> {
        sample.sort_by(|a, b| a.partial_cmp(b).expect("comparable sample"));
        let law = ReturnLaw::Empirical(sample);
        law.validate()?;
        Ok(law)
    }

    /// Checks the parameter constraints of the chosen family.
    pub fn validate(&self) -> Result<()> {
        let zero = T::zero();
        match self {
            ReturnLaw::Lognormal { sigma, .. } | ReturnLaw::Normal { sigma, .. } => {
                if *sigma <= zero {
                    return Err(invalid("sigma", "must be > 0"));
                }
            }
            ReturnLaw::StudentT { nu, scale, .. } => {
                if *nu <= zero {
                    return Err(invalid("nu", "must be > 0"));
                }
                if *scale <= zero {
                    return Err(invalid("scale", "must be > 0"));
                }
            }
            ReturnLaw::Binomial { u, d, p } => {
                if !(*d > zero) {
                    return Err(invalid("d", "must be > 0"));
                }
                if !(*u > *d) {
                    return Err(invalid("u", "must exceed d"));
                }
                if !(*p > zero && *p < T::one()) {
                    return Err(invalid("p", "must lie in (0, 1)"));
                }
            }
            ReturnLaw::Empirical(sample) => {
                if sample.is_empty() {
                    return Err(invalid("sample", "must be non-empty"));
                }
                if sample.windows(2).any(|w| w[0] > w[1]) {
                    return Err(invalid("sample", "must be sorted ascending"));
                }
            }
        }
        Ok(())
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, ReturnLaw::Binomial { .. } | ReturnLaw::Empirical(_))
    }

    /// Point masses `(value, probability)` in ascending order for discrete laws.
    pub fn atoms(&self) -> Option<Vec<(T, T)>> {
        match self {
            ReturnLaw::Binomial { u, d, p } => Some(vec![(d.clone(), p.clone()), (u.clone(), T::one() - p.clone())]),
            ReturnLaw::Empirical(sample) => {
                let mut n = T::zero();
                for _ in sample {
                    n = n + T::one();
                }
                let w = T::one() / n;
                let mut atoms: Vec<(T, T)> = Vec::new();
                for x in sample {
                    match atoms.last_mut() {
                        Some((v, pr)) if v == x => *pr = pr.clone() + w.clone(),
                        _ => atoms.push((x.clone(), w.clone())),
                    }
                }
                Some(atoms)
            }
            _ => None,
        }
    }
}

impl<T: Real> ReturnLaw<T> {
    /// `P(1 + R <= x)`.
    pub fn cdf(&self, x: T) -> T {
        match self {
            ReturnLaw::Lognormal { mu, sigma } => {
                if x <= T::zero() {
                    T::zero()
                } else {
                    special::norm_cdf((x.ln() - *mu) / *sigma)
                }
            }
            ReturnLaw::Normal { mu, sigma } => special::norm_cdf((x - T::one() - *mu) / *sigma),
            ReturnLaw::StudentT { nu, loc, scale } => special::t_cdf((x - T::one() - *loc) / *scale, *nu),
            _ => discrete_cdf(&self.atoms().expect("discrete"), x, false),
        }
    }

    /// `P(1 + R > x)`, computed from the upper tail directly.
    pub fn sf(&self, x: T) -> T {
        match self {
            ReturnLaw::Lognormal { mu, sigma } => {
                if x <= T::zero() {
                    T::one()
                } else {
                    special::norm_sf((x.ln() - *mu) / *sigma)
                }
            }
            ReturnLaw::Normal { mu, sigma } => special::norm_sf((x - T::one() - *mu) / *sigma),
            ReturnLaw::StudentT { nu, loc, scale } => special::t_sf((x - T::one() - *loc) / *scale, *nu),
            _ => T::one() - discrete_cdf(&self.atoms().expect("discrete"), x, false),
        }
    }

    /// `P(1 + R < x)`.
    pub fn cdf_strict(&self, x: T) -> T {
        if self.is_discrete() {
            discrete_cdf(&self.atoms().expect("discrete"), x, true)
        } else {
            self.cdf(x)
        }
    }

    /// Left-continuous quantile `inf { x : F(x) >= p }`.
    ///
    /// The empirical law returns the midpoint of the two neighbouring order
    /// statistics when `p` falls exactly on a step boundary `i / n`.
    pub fn quantile(&self, p: T) -> T {
        match self {
            ReturnLaw::Lognormal { mu, sigma } => (*mu + *sigma * special::norm_ppf(p)).exp(),
            ReturnLaw::Normal { mu, sigma } => T::one() + *mu + *sigma * special::norm_ppf(p),
            ReturnLaw::StudentT { nu, loc, scale } => T::one() + *loc + *scale * special::t_ppf(p, *nu),
            ReturnLaw::Binomial { u, d, p: pd } => {
                if p <= *pd {
                    *d
                } else {
                    *u
                }
            }
            ReturnLaw::Empirical(sample) => empirical_quantile(sample, p),
        }
    }

    /// Inverse survival: the `x` with `P(1 + R > x) = q`.
    pub fn upper_quantile(&self, q: T) -> T {
        match self {
            ReturnLaw::Lognormal { mu, sigma } => (*mu + *sigma * special::norm_isf(q)).exp(),
            ReturnLaw::Normal { mu, sigma } => T::one() + *mu + *sigma * special::norm_isf(q),
            ReturnLaw::StudentT { nu, loc, scale } => T::one() + *loc + *scale * special::t_isf(q, *nu),
            _ => self.quantile(T::one() - q),
        }
    }

    /// The single value of a degenerate (one-point) law.
    pub fn constant_value(&self) -> Option<T> {
        match self {
            ReturnLaw::Empirical(sample) if sample.first() == sample.last() => sample.first().copied(),
            _ => None,
        }
    }
}

fn discrete_cdf<T: Real>(atoms: &[(T, T)], x: T, strict: bool) -> T {
    let mut acc = T::zero();
    for &(v, p) in atoms {
        if v < x || (!strict && v == x) {
            acc = acc + p;
        }
    }
    acc.min(T::one())
}

fn empirical_quantile<T: Real>(sample: &[T], p: T) -> T {
    let n = sample.len();
    if p <= T::zero() {
        return sample[0];
    }
    if p >= T::one() {
        return sample[n - 1];
    }
    let scaled = p * T::lit(n as f64);
    let k = scaled.ceil();
    let idx = k.to_usize().unwrap_or(n).clamp(1, n);
    if scaled == k && idx < n {
        (sample[idx - 1] + sample[idx]) / T::lit(2.0)
    } else {
        sample[idx - 1]
    }
}

/// Law of a real random variable built from the gross return: either a finite
/// set of atoms or an affine image `shift + scale * (1 + R)` of a continuous
/// return law.
#[derive(Debug, Clone, PartialEq)]
pub enum SignedDistribution<T> {
    /// Ascending, de-duplicated `(value, probability)` pairs.
    Discrete(Vec<(T, T)>),
    Affine {
        base: ReturnLaw<T>,
        shift: T,
        scale: T,
    },
}

impl<T: Real> SignedDistribution<T> {
    pub fn constant(c: T) -> Self {
        SignedDistribution::Discrete(vec![(c, T::one())])
    }

    /// Builds a discrete law, sorting and merging equal values.
    pub fn discrete(mut atoms: Vec<(T, T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(invalid("atoms", "must be non-empty"));
        }
        if atoms.iter().any(|(v, p)| !v.is_finite() || !(*p >= T::zero())) {
            return Err(invalid("atoms", "values must be finite, probabilities >= 0"));
        }
        let total: T = atoms.iter().map(|a| a.1).sum();
        if (total - T::one()).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(64.0)) {
            return Err(invalid("atoms", format!("probabilities sum to {total}, not 1")));
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        let mut merged: Vec<(T, T)> = Vec::with_capacity(atoms.len());
        for (v, p) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 = last.1 + p,
                _ => merged.push((v, p)),
            }
        }
        merged.retain(|a| a.1 > T::zero());
        Ok(SignedDistribution::Discrete(merged))
    }

    /// Law of `shift + scale * (1 + R)`. Discrete bases and zero scale give
    /// exact atom lists.
    pub fn affine(base: &ReturnLaw<T>, shift: T, scale: T) -> Self {
        if let Some(atoms) = base.atoms() {
            let mapped = atoms.into_iter().map(|(v, p)| (shift + scale * v, p)).collect();
            return SignedDistribution::discrete(mapped).expect("valid mapped atoms");
        }
        if scale == T::zero() {
            return SignedDistribution::constant(shift);
        }
        SignedDistribution::Affine {
            base: base.clone(),
            shift,
            scale,
        }
    }

    /// Law of `c * X` for this `X`.
    pub fn scaled(&self, c: T) -> Self {
        match self {
            SignedDistribution::Discrete(atoms) => {
                let mapped = atoms.iter().map(|&(v, p)| (c * v, p)).collect();
                SignedDistribution::discrete(mapped).expect("valid atoms")
            }
            SignedDistribution::Affine { base, shift, scale } => {
                SignedDistribution::affine(base, *shift * c, *scale * c)
            }
        }
    }

    pub fn atoms(&self) -> Option<&[(T, T)]> {
        match self {
            SignedDistribution::Discrete(atoms) => Some(atoms),
            SignedDistribution::Affine { .. } => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, SignedDistribution::Discrete(_))
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: T) -> T {
        match self {
            SignedDistribution::Discrete(atoms) => discrete_cdf(atoms, x, false),
            SignedDistribution::Affine { base, shift, scale } => {
                let y = (x - *shift) / *scale;
                if *scale > T::zero() {
                    base.cdf(y)
                } else {
                    base.sf(y)
                }
            }
        }
    }

    /// `P(X < x)`.
    pub fn cdf_strict(&self, x: T) -> T {
        match self {
            SignedDistribution::Discrete(atoms) => discrete_cdf(atoms, x, true),
            SignedDistribution::Affine { .. } => self.cdf(x),
        }
    }

    /// `P(X > x) = 1 - F(x)`, taken from the upper tail for continuous laws.
    pub fn sf(&self, x: T) -> T {
        match self {
            SignedDistribution::Discrete(atoms) => T::one() - discrete_cdf(atoms, x, false),
            SignedDistribution::Affine { base, shift, scale } => {
                let y = (x - *shift) / *scale;
                if *scale > T::zero() {
                    base.sf(y)
                } else {
                    base.cdf(y)
                }
            }
        }
    }

    /// `P(X >= x)`.
    pub fn sf_weak(&self, x: T) -> T {
        match self {
            SignedDistribution::Discrete(atoms) => {
                atoms.iter().filter(|a| a.0 >= x).map(|a| a.1).sum::<T>().min(T::one())
            }
            SignedDistribution::Affine { .. } => self.sf(x),
        }
    }

    /// Quantile function on `(0, 1)`.
    pub fn quantile(&self, p: T) -> T {
        match self {
            SignedDistribution::Discrete(atoms) => {
                let mut acc = T::zero();
                for &(v, pr) in atoms.iter() {
                    acc = acc + pr;
                    if acc >= p {
                        return v;
                    }
                }
                atoms[atoms.len() - 1].0
            }
            SignedDistribution::Affine { base, shift, scale } => {
                if *scale > T::zero() {
                    *shift + *scale * base.quantile(p)
                } else {
                    *shift + *scale * base.upper_quantile(p)
                }
            }
        }
    }

    /// Inverse survival function: the `x` with `P(X > x) = q`.
    pub fn upper_quantile(&self, q: T) -> T {
        match self {
            SignedDistribution::Discrete(_) => self.quantile(T::one() - q),
            SignedDistribution::Affine { base, shift, scale } => {
                if *scale > T::zero() {
                    *shift + *scale * base.upper_quantile(q)
                } else {
                    *shift + *scale * base.quantile(q)
                }
            }
        }
    }

    /// Whether the law has compact support.
    pub fn is_bounded(&self) -> bool {
        self.is_discrete()
    }
}
