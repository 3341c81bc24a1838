//! Scalar abstractions.
//!
//! Two tiers are used across the crate. [`Field`] covers the closed-form
//! market algebra (wealth, replication, pseudo-probabilities) and is satisfied
//! by `f32`, `f64` and exact rationals such as `num_rational::BigRational`.
//! [`Real`] adds the transcendental functions needed by distributions,
//! utilities, weightings and quadrature, and is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};

use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Ordered field with cheap cloning: enough for the exact market algebra.
pub trait Field: Clone + PartialOrd + Num + Neg<Output = Self> + Debug {}

impl<T: Clone + PartialOrd + Num + Neg<Output = T> + Debug> Field for T {}

/// Floating-point scalar used by every numerical routine.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + std::iter::Sum + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `max(x, 0)`.
#[inline]
pub fn pos_part<T: Field>(x: &T) -> T {
    if *x > T::zero() {
        x.clone()
    } else {
        T::zero()
    }
}

/// `max(-x, 0)`.
#[inline]
pub fn neg_part<T: Field>(x: &T) -> T {
    if *x < T::zero() {
        -x.clone()
    } else {
        T::zero()
    }
}
