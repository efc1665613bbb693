//! Shared numerical building blocks: grids, quadrature, compensated sums.

use crate::real::Real;

/// `n` evenly spaced points covering `[a, b]` inclusive. `n >= 2` except that
/// `n == 1` yields `[a]`.
pub fn linspace<R: Real>(a: R, b: R, n: usize) -> Vec<R> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / R::of_usize(n - 1);
    let mut out: Vec<R> = (0..n).map(|k| a + step * R::of_usize(k)).collect();
    // Pin the endpoint so downstream range checks can use exact comparison.
    out[n - 1] = b;
    out
}

/// `n` logarithmically spaced points covering `[a, b]` inclusive; requires
/// `0 < a <= b`.
pub fn logspace<R: Real>(a: R, b: R, n: usize) -> Vec<R> {
    assert!(
        a > R::zero() && b >= a,
        "logspace requires 0 < a <= b (got a={a}, b={b})"
    );
    let mut out: Vec<R> = linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(|x| x.exp())
        .collect();
    out[0] = a;
    let last = out.len() - 1;
    out[last] = b;
    out
}

/// Neumaier-compensated running sum; accurate to a few ulps independent of
/// the number of addends.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<R> {
    sum: R,
    compensation: R,
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        Self {
            sum: R::zero(),
            compensation: R::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: R) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> R {
        self.sum + self.compensation
    }
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Trapezoid rule over tabulated `(xs, ys)`; `xs` must be strictly
/// increasing and the slices equally long.
pub fn trapezoid<R: Real>(xs: &[R], ys: &[R]) -> R {
    assert_eq!(xs.len(), ys.len(), "mismatched table lengths");
    let half = R::of(0.5);
    let mut acc = CompensatedSum::new();
    for k in 1..xs.len() {
        acc.add((xs[k] - xs[k - 1]) * (ys[k] + ys[k - 1]) * half);
    }
    acc.total()
}

/// Cumulative trapezoid integral of `ys` over `xs`; entry `k` approximates
/// the integral from `xs[0]` to `xs[k]` (entry 0 is zero).
pub fn cumulative_trapezoid<R: Real>(xs: &[R], ys: &[R]) -> Vec<R> {
    assert_eq!(xs.len(), ys.len(), "mismatched table lengths");
    let half = R::of(0.5);
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = CompensatedSum::new();
    out.push(R::zero());
    for k in 1..xs.len() {
        acc.add((xs[k] - xs[k - 1]) * (ys[k] + ys[k - 1]) * half);
        out.push(acc.total());
    }
    out
}

/// Linear interpolation in a tabulated function; clamps outside the table.
/// `xs` must be strictly increasing.
pub fn interp_linear<R: Real>(xs: &[R], ys: &[R], x: R) -> R {
    assert_eq!(xs.len(), ys.len(), "mismatched table lengths");
    assert!(!xs.is_empty(), "empty table");
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    // First index with xs[hi] > x; the preceding cell brackets x.
    let hi = xs.partition_point(|&v| v <= x);
    let lo = hi - 1;
    let w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    ys[lo] + (ys[hi] - ys[lo]) * w
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `abs_tol`. The integrand must be finite on the interval.
pub fn adaptive_simpson<R: Real, F: Fn(R) -> R>(f: &F, a: R, b: R, abs_tol: R) -> R {
    if a == b {
        return R::zero();
    }
    let half = R::of(0.5);
    let m = (a + b) * half;
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson_rule(a, b, fa, fm, fb);
    simpson_recurse(f, a, m, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

const MAX_DEPTH: u32 = 40;

#[inline]
fn simpson_rule<R: Real>(a: R, b: R, fa: R, fm: R, fb: R) -> R {
    (b - a) / R::of(6.0) * (fa + R::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<R: Real, F: Fn(R) -> R>(
    f: &F,
    a: R,
    m: R,
    b: R,
    fa: R,
    fm: R,
    fb: R,
    whole: R,
    tol: R,
    depth: u32,
) -> R {
    let half = R::of(0.5);
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= R::of(15.0) * tol {
        return left + right + delta / R::of(15.0);
    }
    let half_tol = tol * half;
    simpson_recurse(f, a, lm, m, fa, flm, fm, left, half_tol, depth - 1)
        + simpson_recurse(f, m, rm, b, fm, frm, fb, right, half_tol, depth - 1)
}

/// Clamps a probability-valued result into `[0, 1]`.
///
/// Quadrature and series summation legitimately overshoot the endpoints by
/// roundoff-sized amounts (~1e-15 .. 1e-9 depending on the tolerance in
/// play); those excursions are absorbed here rather than leaking out of
/// probability-valued APIs. Interior values pass through untouched.
pub fn clamp_probability<R: Real>(p: R) -> R {
    p.max(R::zero()).min(R::one())
}
