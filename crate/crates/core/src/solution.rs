//! Tagged optimal-strategy results.

use std::fmt;

use crate::scalar::Real;

/// Where the supremum of the prospect is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimum<T> {
    Finite(T),
    /// Every point of `[lo, hi]` is optimal; either end may be infinite.
    Interval {
        lo: T,
        hi: T,
    },
    /// Prospect increases without bound (or to its supremum) as `theta -> +inf`.
    PlusInfinity,
    /// Prospect increases to its supremum as `theta -> -inf`.
    MinusInfinity,
}

impl<T: Real> Optimum<T> {
    /// A finite optimal strategy if one exists: the point itself, or the
    /// interval's finite end (its lower end when both are finite).
    pub fn representative(&self) -> Option<T> {
        match *self {
            Optimum::Finite(t) => Some(t),
            Optimum::Interval { lo, hi } => {
                if lo.is_finite() {
                    Some(lo)
                } else if hi.is_finite() {
                    Some(hi)
                } else {
                    Some(T::zero())
                }
            }
            _ => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Optimum::PlusInfinity | Optimum::MinusInfinity)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Optimum::Finite(_) => "finite",
            Optimum::Interval { .. } => "interval",
            Optimum::PlusInfinity => "plus_infinity",
            Optimum::MinusInfinity => "minus_infinity",
        }
    }
}

impl<T: Real> fmt::Display for Optimum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |x: T| {
            if x == T::infinity() {
                "+inf".to_string()
            } else if x == T::neg_infinity() {
                "-inf".to_string()
            } else {
                format!("{x}")
            }
        };
        match *self {
            Optimum::Finite(t) => write!(f, "{t}"),
            Optimum::Interval { lo, hi } => write!(f, "[{}, {}]", end(lo), end(hi)),
            Optimum::PlusInfinity => f.write_str("+inf"),
            Optimum::MinusInfinity => f.write_str("-inf"),
        }
    }
}

/// Optimal strategy with the case label that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution<T> {
    pub optimum: Optimum<T>,
    /// Label of the governing case, e.g. `"T3.1-1d"`.
    pub case_id: &'static str,
    /// Optimal prospect; `+inf` for ill-posed problems, the limit prospect
    /// for the binomial unbounded cases.
    pub prospect: T,
    /// The classification fell inside the numerical tolerance band.
    pub boundary: bool,
}

impl<T: Real> Solution<T> {
    pub(crate) fn new(optimum: Optimum<T>, case_id: &'static str, prospect: T) -> Self {
        Solution {
            optimum,
            case_id,
            prospect,
            boundary: false,
        }
    }

    pub(crate) fn flagged(mut self, boundary: bool) -> Self {
        self.boundary |= boundary;
        self
    }
}

impl<T: Real> fmt::Display for Solution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} theta* = {} J* = {}{}",
            self.case_id,
            self.optimum,
            self.prospect,
            if self.boundary { " (boundary)" } else { "" }
        )
    }
}
