//! Normal and Student-t distribution functions, evaluated in `f64` and cast
//! back to the caller's scalar.
//!
//! `erfc` comes from `libm`; the regularized incomplete beta function and the
//! starting guesses for the inverses come from `statrs`, and the inverses are
//! polished with Newton steps in log-probability so that tail quantiles keep
//! full relative precision.

use statrs::function::{beta, erf, gamma};

use crate::scalar::Real;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Standard normal CDF.
pub fn norm_cdf<T: Real>(z: T) -> T {
    T::lit(phi(z.as_f64()))
}

/// Standard normal survival function `1 - Phi(z)`.
pub fn norm_sf<T: Real>(z: T) -> T {
    T::lit(phi(-z.as_f64()))
}

/// Standard normal quantile for `p` in `(0, 1)`.
pub fn norm_ppf<T: Real>(p: T) -> T {
    T::lit(norm_ppf_f64(p.as_f64()))
}

/// Inverse survival: the `z` with `1 - Phi(z) = q`.
pub fn norm_isf<T: Real>(q: T) -> T {
    T::lit(-norm_ppf_f64(q.as_f64()))
}

fn phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

fn phi_density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn norm_ppf_f64(p: f64) -> f64 {
    if p.is_nan() {
        return f64::NAN;
    }
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        return -norm_ppf_f64(1.0 - p);
    }
    let mut z = -SQRT_2 * erf::erfc_inv(2.0 * p);
    let target = p.ln();
    for _ in 0..4 {
        let c = phi(z);
        if !(c > 0.0) {
            break;
        }
        let step = (c.ln() - target) * c / phi_density(z);
        z -= step;
        if step.abs() <= 1e-16 * z.abs().max(1.0) {
            break;
        }
    }
    z
}

/// Standard Student-t CDF with `nu` degrees of freedom.
pub fn t_cdf<T: Real>(t: T, nu: T) -> T {
    T::lit(t_cdf_f64(t.as_f64(), nu.as_f64()))
}

/// Student-t survival `P(X > t)`.
pub fn t_sf<T: Real>(t: T, nu: T) -> T {
    T::lit(t_cdf_f64(-t.as_f64(), nu.as_f64()))
}

/// Student-t quantile.
pub fn t_ppf<T: Real>(p: T, nu: T) -> T {
    T::lit(t_quantile(p.as_f64(), nu.as_f64()))
}

/// Student-t inverse survival.
pub fn t_isf<T: Real>(q: T, nu: T) -> T {
    T::lit(-t_quantile(q.as_f64(), nu.as_f64()))
}

fn t_cdf_f64(t: f64, nu: f64) -> f64 {
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let x = nu / (nu + t * t);
    let tail = 0.5 * beta::beta_reg(0.5 * nu, 0.5, x);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

fn t_density(t: f64, nu: f64) -> f64 {
    let ln_norm =
        gamma::ln_gamma(0.5 * (nu + 1.0)) - gamma::ln_gamma(0.5 * nu) - 0.5 * (nu * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (nu + 1.0) * (t * t / nu).ln_1p()).exp()
}

/// Quantile taken from whichever tail `p` sits in.
fn t_quantile(p: f64, nu: f64) -> f64 {
    if p.is_nan() {
        return f64::NAN;
    }
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p == 0.5 {
        return 0.0;
    }
    let mag = t_lower_magnitude(p.min(1.0 - p), nu);
    if p < 0.5 {
        -mag
    } else {
        mag
    }
}

/// `m > 0` with `P(t_nu < -m) = tail`, for `tail < 1/2`.
fn t_lower_magnitude(tail: f64, nu: f64) -> f64 {
    let y = beta::inv_beta_reg(0.5 * nu, 0.5, 2.0 * tail);
    let mut m = (nu * (1.0 - y) / y).sqrt();
    if !(m.is_finite() && m > 0.0) {
        // far tail: P(t < -m) ~ c m^-nu
        m = -t_quantile_normal_guess(tail);
    }
    let target = tail.ln();
    // Newton on s = ln m, where ln F(-m) is close to linear in s
    let mut s = m.ln();
    for _ in 0..60 {
        let m = s.exp();
        let c = t_cdf_f64(-m, nu);
        if !(c > 0.0) {
            s -= 1.0;
            continue;
        }
        let slope = -t_density(-m, nu) * m / c;
        let step = ((c.ln() - target) / slope).clamp(-2.0, 2.0);
        s -= step;
        if step.abs() <= 4e-16 {
            break;
        }
    }
    s.exp()
}

fn t_quantile_normal_guess(tail: f64) -> f64 {
    norm_ppf_f64(tail).min(-1e-3)
}
