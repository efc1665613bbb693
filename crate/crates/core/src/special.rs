//! Special functions: log-gamma, digamma/trigamma, regularized incomplete
//! gamma, error function, and the standard normal distribution.
//!
//! All routines are generic over [`Real`]. In `f64` the incomplete gamma
//! ratios are good to roughly 1e-14 relative error for shapes up to 1e4+,
//! which comfortably supports the 1e-10 absolute targets of the callers.
//! Invalid arguments (non-positive shapes, negative upper limits, ...) yield
//! NaN here; argument validation with proper errors lives on the public
//! wrappers in the stochastic layer.

use crate::real::Real;

// Lanczos approximation, g = 7, 9 terms. Relative error ~1e-15 in f64 over
// the positive axis.
const LANCZOS_G: f64 = 7.0;
// Published coefficients kept verbatim; digits beyond f64 round away.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`; NaN otherwise.
pub fn ln_gamma<R: Real>(x: R) -> R {
    if !(x > R::zero()) || !x.is_finite() {
        return R::nan();
    }
    let half = R::of(0.5);
    if x < half {
        // Reflection keeps the Lanczos argument away from the poles.
        let pi = R::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(R::one() - x);
    }
    let g = R::of(LANCZOS_G);
    let z = x - R::one();
    let mut series = R::of(LANCZOS_COEF[0]);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += R::of(c) / (z + R::of_usize(k));
    }
    let t = z + g + half;
    let ln_sqrt_two_pi = R::of(0.918_938_533_204_672_8);
    ln_sqrt_two_pi + (z + half) * t.ln() - t + series.ln()
}

// Asymptotic tail coefficients for digamma: -B_{2k}/(2k), k = 1..
const DIGAMMA_TAIL: [f64; 7] = [
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32_760.0,
    -1.0 / 12.0,
];

/// Digamma function ψ(x) = d/dx ln Γ(x) for `x > 0`; NaN otherwise.
pub fn digamma<R: Real>(x: R) -> R {
    if !(x > R::zero()) || !x.is_finite() {
        return R::nan();
    }
    let mut x = x;
    let mut acc = R::zero();
    // Shift into the asymptotic regime: ψ(x) = ψ(x+1) − 1/x.
    let threshold = R::of(10.0);
    while x < threshold {
        acc -= x.recip();
        x += R::one();
    }
    let inv2 = (x * x).recip();
    let mut tail = R::zero();
    let mut power = inv2;
    for &c in &DIGAMMA_TAIL {
        tail += R::of(c) * power;
        power *= inv2;
    }
    acc + x.ln() - R::of(0.5) / x + tail
}

// Asymptotic tail coefficients for trigamma: B_{2k}, k = 1..
const TRIGAMMA_TAIL: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2_730.0,
];

/// Trigamma function ψ'(x) for `x > 0`; NaN otherwise.
pub fn trigamma<R: Real>(x: R) -> R {
    if !(x > R::zero()) || !x.is_finite() {
        return R::nan();
    }
    let mut x = x;
    let mut acc = R::zero();
    // ψ'(x) = ψ'(x+1) + 1/x².
    let threshold = R::of(10.0);
    while x < threshold {
        acc += (x * x).recip();
        x += R::one();
    }
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut tail = R::zero();
    let mut power = inv2 * inv; // x^{-3}
    for &c in &TRIGAMMA_TAIL {
        tail += R::of(c) * power;
        power *= inv2;
    }
    acc + inv + R::of(0.5) * inv2 + tail
}

/// Iteration budget for the incomplete-gamma series/continued fraction. Both
/// expansions need O(√a) terms near the transition point x ≈ a, so the cap
/// scales with the shape.
fn gamma_iter_cap<R: Real>(a: R) -> usize {
    200 + (R::of(10.0) * a.sqrt()).as_f64() as usize
}

/// Regularized lower incomplete gamma ratio P(a, x) = γ(a, x)/Γ(a).
///
/// Requires `a > 0` and `x >= 0` (NaN otherwise). P(a, 0) = 0.
pub fn regularized_gamma_p<R: Real>(a: R, x: R) -> R {
    if !(a > R::zero()) || x < R::zero() || !a.is_finite() || x.is_nan() {
        return R::nan();
    }
    if x == R::zero() {
        return R::zero();
    }
    if !x.is_finite() {
        return R::one();
    }
    if x < a + R::one() {
        lower_series(a, x)
    } else {
        R::one() - upper_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma ratio Q(a, x) = 1 − P(a, x).
pub fn regularized_gamma_q<R: Real>(a: R, x: R) -> R {
    if !(a > R::zero()) || x < R::zero() || !a.is_finite() || x.is_nan() {
        return R::nan();
    }
    if x == R::zero() {
        return R::one();
    }
    if !x.is_finite() {
        return R::zero();
    }
    if x < a + R::one() {
        R::one() - lower_series(a, x)
    } else {
        upper_continued_fraction(a, x)
    }
}

/// ln of the common prefactor x^a e^{-x} / Γ(a).
fn ln_prefactor<R: Real>(a: R, x: R) -> R {
    a * x.ln() - x - ln_gamma(a)
}

/// Series expansion of P(a, x), effective for x < a + 1.
fn lower_series<R: Real>(a: R, x: R) -> R {
    let eps = R::epsilon();
    let cap = gamma_iter_cap(a);
    let mut ap = a;
    let mut term = a.recip();
    let mut sum = term;
    for _ in 0..cap {
        ap += R::one();
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * eps {
            break;
        }
    }
    let value = sum * (ln_prefactor(a, x)).exp();
    value.max(R::zero()).min(R::one())
}

/// Modified-Lentz continued fraction for Q(a, x), effective for x >= a + 1.
fn upper_continued_fraction<R: Real>(a: R, x: R) -> R {
    let eps = R::epsilon();
    let tiny = R::min_positive_value();
    let cap = gamma_iter_cap(a);
    let mut b = x + R::one() - a;
    let mut c = tiny.recip();
    let mut d = b.recip();
    let mut h = d;
    for i in 1..=cap {
        let an = -R::of_usize(i) * (R::of_usize(i) - a);
        b += R::of(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = d * c;
        h *= delta;
        if (delta - R::one()).abs() < eps {
            break;
        }
    }
    let value = h * (ln_prefactor(a, x)).exp();
    value.max(R::zero()).min(R::one())
}

/// Error function; accurate to ~1e-13 relative in f64.
pub fn erf<R: Real>(x: R) -> R {
    if x.is_nan() {
        return R::nan();
    }
    let p = regularized_gamma_p(R::of(0.5), x * x);
    if x >= R::zero() {
        p
    } else {
        -p
    }
}

/// Complementary error function, accurate in both tails.
pub fn erfc<R: Real>(x: R) -> R {
    if x.is_nan() {
        return R::nan();
    }
    if x >= R::zero() {
        regularized_gamma_q(R::of(0.5), x * x)
    } else {
        R::one() + regularized_gamma_p(R::of(0.5), x * x)
    }
}

/// Standard normal CDF Φ(z), computed through `erfc` so both tails keep full
/// relative accuracy.
pub fn std_normal_cdf<R: Real>(z: R) -> R {
    let half = R::of(0.5);
    half * erfc(-z / R::SQRT_2())
}

/// Standard normal density.
pub fn std_normal_pdf<R: Real>(z: R) -> R {
    let inv_sqrt_two_pi = R::of(0.398_942_280_401_432_7);
    inv_sqrt_two_pi * (-z * z * R::of(0.5)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adaptive_simpson;

    fn abs_eq(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol,
            "expected {a} ≈ {b} (tol {tol:.1e}, diff {:.3e})",
            (a - b).abs()
        );
    }

    fn rel_eq(a: f64, b: f64, tol: f64) {
        let scale = b.abs().max(1e-300);
        assert!(
            ((a - b) / scale).abs() <= tol,
            "expected {a} ≈ {b} (rel tol {tol:.1e})"
        );
    }

    #[test]
    fn ln_gamma_matches_known_values() {
        // Γ(n) = (n−1)! at integers; Γ(1/2) = √π.
        rel_eq(ln_gamma(1.0_f64), 0.0, 1e-14);
        abs_eq(ln_gamma(2.0_f64), 0.0, 1e-14);
        rel_eq(ln_gamma(5.0_f64), 24.0_f64.ln(), 1e-14);
        rel_eq(ln_gamma(0.5_f64), std::f64::consts::PI.sqrt().ln(), 1e-13);
        rel_eq(ln_gamma(12.5_f64), 18.734_347_511_936_445, 1e-13);
        rel_eq(ln_gamma(1e4_f64), 82_099.717_496_442_37, 1e-12);
        assert!(ln_gamma(-1.0_f64).is_nan());
        assert!(ln_gamma(0.0_f64).is_nan());
    }

    #[test]
    fn ln_gamma_satisfies_recurrence() {
        for &x in &[0.07_f64, 0.3, 1.7, 9.9, 123.4, 4e3] {
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + x.ln();
            rel_eq(lhs, rhs, 1e-12);
        }
    }

    #[test]
    fn digamma_matches_statrs_and_recurrence() {
        for &x in &[0.1_f64, 0.9, 2.5, 7.0, 42.0, 1234.5] {
            rel_eq(digamma(x), statrs::function::gamma::digamma(x), 1e-11);
            abs_eq(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-12);
        }
        // ψ(1) = −γ (Euler–Mascheroni).
        abs_eq(digamma(1.0_f64), -0.577_215_664_901_532_9, 1e-14);
    }

    #[test]
    fn trigamma_matches_series_and_recurrence() {
        // ψ'(1) = π²/6.
        abs_eq(trigamma(1.0_f64), std::f64::consts::PI.powi(2) / 6.0, 1e-13);
        for &x in &[0.2_f64, 1.3, 5.5, 80.0] {
            abs_eq(trigamma(x + 1.0), trigamma(x) - 1.0 / (x * x), 1e-12);
        }
        // Central difference of digamma as an independent oracle.
        for &x in &[0.8_f64, 3.0, 20.0] {
            let h = 1e-5;
            let fd = (digamma(x + h) - digamma(x - h)) / (2.0 * h);
            rel_eq(trigamma(x), fd, 1e-8);
        }
    }

    #[test]
    fn gamma_p_matches_closed_forms() {
        // P(1, x) = 1 − e^{−x}.
        for &x in &[0.01_f64, 0.5, 3.0, 20.0] {
            rel_eq(regularized_gamma_p(1.0, x), 1.0 - (-x).exp(), 1e-13);
        }
        // Integer shape 5 at x = 6: 1 − e^{−6}(1 + 6 + 18 + 36 + 54).
        let expected = 1.0 - 115.0 * (-6.0_f64).exp();
        rel_eq(regularized_gamma_p(5.0, 6.0), expected, 1e-13);
        abs_eq(expected, 0.714_943_499_683_368_8, 1e-15);
        // Complementarity.
        for &(a, x) in &[(0.3_f64, 0.2_f64), (2.0, 2.0), (7.5, 3.0), (100.0, 110.0)] {
            abs_eq(
                regularized_gamma_p(a, x) + regularized_gamma_q(a, x),
                1.0,
                1e-13,
            );
        }
        assert_eq!(regularized_gamma_p(2.0, 0.0), 0.0);
        assert_eq!(regularized_gamma_q(2.0, 0.0), 1.0);
        assert!(regularized_gamma_p(0.0f64, 1.0).is_nan());
        assert!(regularized_gamma_p(1.0f64, -0.5).is_nan());
    }

    #[test]
    fn gamma_p_matches_quadrature_oracle() {
        // Direct numerical integration of the defining density.
        for &(a, x) in &[
            (0.5_f64, 0.2_f64),
            (0.5, 2.0),
            (2.5, 1.0),
            (2.5, 8.0),
            (10.0, 9.5),
            (25.0, 30.0),
        ] {
            let density = |t: f64| {
                if t <= 0.0 {
                    0.0
                } else {
                    (a * t.ln() - t - ln_gamma(a)).exp() / t
                }
            };
            // The density can be singular at 0 (a < 1), so the quadrature
            // starts at ε > 0 and the head ∫_0^ε t^{a−1}e^{−t}dt/Γ(a) is
            // added analytically: ε^a/Γ(a)·(1/a − ε/(a+1) + ε²/(2(a+2))).
            let eps = 1e-8_f64;
            let head = (a * eps.ln() - ln_gamma(a)).exp()
                * (1.0 / a - eps / (a + 1.0) + eps * eps / (2.0 * (a + 2.0)));
            let oracle = head + adaptive_simpson(&density, eps, x, 1e-12);
            abs_eq(regularized_gamma_p(a, x), oracle, 1e-9);
        }
    }

    #[test]
    fn gamma_p_matches_statrs() {
        for &a in &[0.2_f64, 1.0, 3.7, 48.0, 512.0, 1e4] {
            for &frac in &[0.2_f64, 0.8, 1.0, 1.3, 3.0] {
                let x = a * frac;
                let ours = regularized_gamma_p(a, x);
                let theirs = statrs::function::gamma::gamma_lr(a, x);
                abs_eq(ours, theirs, 1e-10);
            }
        }
    }

    #[test]
    fn gamma_p_handles_large_shapes() {
        // Around the mean the ratio transitions; the CLT gives P ≈ 1/2.
        for &a in &[1e3_f64, 1e4] {
            let p = regularized_gamma_p(a, a);
            assert!((p - 0.5).abs() < 0.02, "P({a}, {a}) = {p}");
            let q = regularized_gamma_q(a, a + 8.0 * a.sqrt());
            assert!(q > 0.0 && q < 1e-10, "far upper tail: {q}");
        }
    }

    #[test]
    fn erf_and_normal_cdf_reference_values() {
        rel_eq(erf(1.0_f64), 0.842_700_792_949_714_9, 1e-12);
        rel_eq(erfc(2.0_f64), 0.004_677_734_981_063_127, 1e-11);
        abs_eq(erf(-1.0_f64), -erf(1.0_f64), 1e-15);
        abs_eq(std_normal_cdf(0.0_f64), 0.5, 1e-15);
        rel_eq(std_normal_cdf(1.959_963_984_540_054_f64), 0.975, 1e-12);
        // The deep lower tail is computed without cancellation:
        // Φ(-6) = erfc(6/√2)/2 directly.
        rel_eq(std_normal_cdf(-6.0_f64), 9.865_876_450_376_946e-10, 1e-12);
        // Forming the same tail as 1 − Φ(6) necessarily loses ~9 digits to
        // cancellation at f64; it must still agree to that coarser level.
        let subtracted = 1.0 - std_normal_cdf(6.0_f64);
        rel_eq(subtracted, 9.865_876_450_376_946e-10, 1e-6);
    }

    #[test]
    fn normal_cdf_matches_statrs() {
        use statrs::distribution::ContinuousCDF;
        let n = statrs::distribution::Normal::new(0.0, 1.0).unwrap();
        for &z in &[-8.0_f64, -3.2, -0.7, 0.0, 0.4, 2.9, 5.5] {
            abs_eq(std_normal_cdf(z), n.cdf(z), 1e-12);
        }
    }

    #[test]
    fn f32_instantiation_stays_sane() {
        let p = regularized_gamma_p(2.0_f32, 2.0_f32);
        assert!((p - 0.593_994_15_f32).abs() < 1e-5);
        assert!((std_normal_cdf(0.0_f32) - 0.5).abs() < 1e-6);
    }
}
