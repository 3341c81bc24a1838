//! Adaptive 10/21-point Gauss-Kronrod integration with a global error target.

// node and weight tables keep their published digits
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Real;

// 21-point Kronrod nodes on [-1, 1] (non-negative half); odd indices are the
// 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Convergence target: stop once the summed error estimate is below
/// `max(abs, rel * |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-9,
            max_panels: 2000,
        }
    }
}

/// Integral estimate with its error bound and the number of panels used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub panels: usize,
}

impl<T: Real> Integral<T> {
    pub fn zero() -> Self {
        Integral {
            value: T::zero(),
            error: T::zero(),
            panels: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gauss_kronrod<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let radius = half * (b - a);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[10]);
    let mut gauss = T::zero();
    let mut abs_sum = fc.abs() * T::lit(WGK[10]);
    for j in 0..10 {
        let dx = radius * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod = kronrod + T::lit(WGK[j]) * (f1 + f2);
        abs_sum = abs_sum + T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let value = kronrod * radius;
    let mut error = ((kronrod - gauss) * radius).abs();
    // round-off floor
    let floor = T::lit(50.0) * T::epsilon() * abs_sum * radius.abs();
    if !error.is_finite() || !value.is_finite() {
        error = T::infinity();
    } else if floor > error {
        error = floor;
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the global target is met. `Err` carries the best estimate
/// when the panel budget is exhausted or the integrand is not finite.
pub fn integrate<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    tol: &Tolerance,
) -> std::result::Result<Integral<T>, Integral<T>> {
    integrate_pieces(&f, &[a, b], tol)
}

/// As [`integrate`], starting from the panels between consecutive breakpoints.
pub fn integrate_pieces<T: Real, F: Fn(T) -> T>(
    f: &F,
    breaks: &[T],
    tol: &Tolerance,
) -> std::result::Result<Integral<T>, Integral<T>> {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(gauss_kronrod(f, w[0], w[1]));
        }
    }
    if heap.is_empty() {
        return Ok(Integral::zero());
    }
    // keep the target clear of the per-panel round-off floor
    let rel = T::lit(tol.rel).max(T::lit(200.0) * T::epsilon());
    let abs = T::lit(tol.abs);
    let totals = |heap: &BinaryHeap<Panel<T>>| {
        heap.iter()
            .fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error))
    };
    loop {
        let (value, error) = totals(&heap);
        let panels = heap.len();
        let report = Integral { value, error, panels };
        if error.is_finite() && error <= abs.max(rel * value.abs()) {
            return Ok(report);
        }
        if panels >= tol.max_panels {
            return Err(report);
        }
        let worst = heap.pop().expect("non-empty");
        let mid = T::lit(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // cannot subdivide further in this precision
            heap.push(worst);
            return Err(report);
        }
        heap.push(gauss_kronrod(f, worst.a, mid));
        heap.push(gauss_kronrod(f, mid, worst.b));
    }
}
