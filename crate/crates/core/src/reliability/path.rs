//! Sampled system degradation paths and the accumulated baseline intensity
//! Λ_0(t) = ∫_0^t (λ_0 + γ·X_S(v)) dv they induce.
//!
//! X_S(v) is the system-wide degradation: the sum over components of pure
//! (continuous) degradation, initial age offsets, and shock damages. The
//! continuous part is integrated by the trapezoid rule on the sampling
//! grid; the shock contribution is a step function and is integrated
//! exactly, so refining the grid only changes the (smooth) trapezoid part.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::stochastic::FacilitationParams;

/// A shock event with its per-component damages.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockJump<R> {
    pub time: R,
    /// Damage added to each component's degradation level (may be negative
    /// in the tails of a normal damage law; values are used as drawn).
    pub damages: Vec<R>,
}

/// One sampled realization of every component's degradation over a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradationPath<R> {
    /// Strictly increasing grid starting at 0.
    times: Vec<R>,
    /// `pure[i][k]`: component i's continuous degradation at `times[k]`,
    /// nondecreasing from 0.
    pure: Vec<Vec<R>>,
    /// Initial offsets, one per component.
    ages: Vec<R>,
    /// Shock events, sorted by time.
    jumps: Vec<ShockJump<R>>,
    /// Continuous system level Σ_i pure_i + Σ_i u_i at each grid node.
    continuous: Vec<R>,
    /// Cumulative trapezoid integral of `continuous`.
    cum_continuous: Vec<R>,
}

impl<R: Real> DegradationPath<R> {
    pub fn new(
        times: Vec<R>,
        pure: Vec<Vec<R>>,
        ages: Vec<R>,
        mut jumps: Vec<ShockJump<R>>,
    ) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::domain(
                "degradation path",
                "need at least two grid points",
            ));
        }
        if times[0] != R::zero() {
            return Err(Error::domain("degradation path", "grid must start at 0"));
        }
        if !times.windows(2).all(|w| w[1] > w[0] && w[1].is_finite()) {
            return Err(Error::domain(
                "degradation path",
                "grid must be strictly increasing and finite",
            ));
        }
        if pure.is_empty() || pure.len() != ages.len() {
            return Err(Error::domain(
                "degradation path",
                format!(
                    "component count mismatch: {} paths vs {} ages",
                    pure.len(),
                    ages.len()
                ),
            ));
        }
        let horizon = *times.last().expect("nonempty");
        for (i, p) in pure.iter().enumerate() {
            if p.len() != times.len() {
                return Err(Error::domain(
                    "degradation path",
                    format!("component {i}: path length does not match the grid"),
                ));
            }
            if p[0] != R::zero() {
                return Err(Error::domain(
                    "degradation path",
                    format!("component {i}: continuous degradation must start at 0"),
                ));
            }
            if !p.windows(2).all(|w| w[1] >= w[0]) {
                return Err(Error::domain(
                    "degradation path",
                    format!("component {i}: continuous degradation must be nondecreasing"),
                ));
            }
        }
        for (i, &u) in ages.iter().enumerate() {
            if u < R::zero() || !u.is_finite() {
                return Err(Error::domain(
                    "degradation path",
                    format!("age {i} must be nonnegative and finite (got {u})"),
                ));
            }
        }
        for j in &jumps {
            if j.time < R::zero() || j.time > horizon || !j.time.is_finite() {
                return Err(Error::domain(
                    "degradation path",
                    format!("jump at t={} lies outside [0, {horizon}]", j.time),
                ));
            }
            if j.damages.len() != pure.len() {
                return Err(Error::domain(
                    "degradation path",
                    "jump damage vector length does not match the component count",
                ));
            }
        }
        jumps.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite jump times"));

        let sum_ages: R = ages.iter().copied().sum();
        let continuous: Vec<R> = (0..times.len())
            .map(|k| pure.iter().map(|p| p[k]).sum::<R>() + sum_ages)
            .collect();
        let cum_continuous = crate::numerics::cumulative_trapezoid(&times, &continuous);
        Ok(Self {
            times,
            pure,
            ages,
            jumps,
            continuous,
            cum_continuous,
        })
    }

    pub fn horizon(&self) -> R {
        *self.times.last().expect("nonempty")
    }

    pub fn times(&self) -> &[R] {
        &self.times
    }

    pub fn jumps(&self) -> &[ShockJump<R>] {
        &self.jumps
    }

    pub fn component_count(&self) -> usize {
        self.pure.len()
    }

    /// Component i's total degradation at `t`: continuous part (linearly
    /// interpolated) + initial age + damages from jumps at or before `t`.
    pub fn component_total_at(&self, i: usize, t: R) -> R {
        let cont = crate::numerics::interp_linear(&self.times, &self.pure[i], t);
        let jumped: R = self
            .jumps
            .iter()
            .take_while(|j| j.time <= t)
            .map(|j| j.damages[i])
            .sum();
        cont + self.ages[i] + jumped
    }

    /// System-wide degradation X_S(t) = Σ_i component totals.
    pub fn system_total_at(&self, t: R) -> R {
        (0..self.pure.len())
            .map(|i| self.component_total_at(i, t))
            .sum()
    }

    /// ∫_0^t X_S(v) dv: trapezoid on the continuous part plus the exact
    /// step-function integral of the jumps.
    pub(crate) fn integral_system_total(&self, t: R) -> R {
        let smooth = integral_to(&self.times, &self.continuous, &self.cum_continuous, t);
        let steps: R = self
            .jumps
            .iter()
            .take_while(|j| j.time <= t)
            .map(|j| j.damages.iter().copied().sum::<R>() * (t - j.time))
            .sum();
        smooth + steps
    }
}

/// ∫_{xs[0]}^{t} of the piecewise-linear interpolant of `(xs, ys)`, given
/// the per-node cumulative trapezoid table `cum`. Exact for the interpolant,
/// including the partial final cell.
pub(crate) fn integral_to<R: Real>(xs: &[R], ys: &[R], cum: &[R], t: R) -> R {
    debug_assert_eq!(xs.len(), ys.len());
    debug_assert_eq!(xs.len(), cum.len());
    let last = xs.len() - 1;
    if t >= xs[last] {
        return cum[last];
    }
    if t <= xs[0] {
        return cum[0];
    }
    let hi = xs.partition_point(|&v| v <= t);
    let lo = hi - 1;
    let h = xs[hi] - xs[lo];
    let frac = t - xs[lo];
    let y_t = ys[lo] + (ys[hi] - ys[lo]) * frac / h;
    cum[lo] + frac * (ys[lo] + y_t) * R::of(0.5)
}

/// Accumulated baseline intensity Λ_0(t) = λ_0·t + γ·∫_0^t X_S(v) dv for a
/// sampled path; `t` must lie in [0, horizon].
///
/// Negative damage draws can in principle push the instantaneous intensity
/// below zero; the accumulated value is floored at zero before use in count
/// laws.
pub fn integrate_baseline_intensity<R: Real>(
    path: &DegradationPath<R>,
    params: &FacilitationParams<R>,
    t: R,
) -> Result<R> {
    let mut violations = Vec::new();
    params.validate("params", &mut violations);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    if t < R::zero() || t > path.horizon() || !t.is_finite() {
        return Err(Error::domain(
            "integrate_baseline_intensity",
            format!("t={t} outside the path horizon [0, {}]", path.horizon()),
        ));
    }
    let raw = params.lambda0 * t + params.gamma * path.integral_system_total(t);
    Ok(raw.max(R::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_eq(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol,
            "expected {a} ≈ {b} (tol {tol:.1e}, diff {:.3e})",
            (a - b).abs()
        );
    }

    fn linear_path() -> DegradationPath<f64> {
        // Two components with linear continuous growth 0.3t and 0.2t.
        let times: Vec<f64> = crate::numerics::linspace(0.0, 10.0, 101);
        let p0: Vec<f64> = times.iter().map(|&t| 0.3 * t).collect();
        let p1: Vec<f64> = times.iter().map(|&t| 0.2 * t).collect();
        DegradationPath::new(times, vec![p0, p1], vec![1.0, 0.5], vec![]).unwrap()
    }

    #[test]
    fn totals_combine_continuous_age_and_jumps() {
        let times: Vec<f64> = crate::numerics::linspace(0.0, 10.0, 101);
        let p0: Vec<f64> = times.iter().map(|&t| 0.3 * t).collect();
        let p1: Vec<f64> = times.iter().map(|&t| 0.2 * t).collect();
        let jumps = vec![
            ShockJump {
                time: 4.0,
                damages: vec![0.5, 0.25],
            },
            ShockJump {
                time: 2.0,
                damages: vec![0.1, 0.2],
            },
        ];
        let path = DegradationPath::new(times, vec![p0, p1], vec![1.0, 0.5], jumps).unwrap();
        // Jumps are sorted on construction.
        assert_eq!(path.jumps()[0].time, 2.0);
        abs_eq(path.component_total_at(0, 3.0), 0.9 + 1.0 + 0.1, 1e-12);
        abs_eq(path.system_total_at(5.0), 2.5 + 1.5 + 1.05, 1e-12);
    }

    #[test]
    fn intensity_integral_matches_analytic_linear_case() {
        // X_S(t) = 0.5t + 1.5, so ∫_0^t = 0.25t² + 1.5t and
        // Λ_0(t) = λ_0 t + γ(0.25t² + 1.5t), exact under the trapezoid rule
        // even between grid nodes.
        let path = linear_path();
        let params = FacilitationParams::new(0.01, 0.2, 0.001).unwrap();
        for &t in &[0.0, 1.0, 3.35, 6.295, 10.0] {
            let expect = 0.01 * t + 0.001 * (0.25 * t * t + 1.5 * t);
            let got = integrate_baseline_intensity(&path, &params, t).unwrap();
            abs_eq(got, expect, 1e-12);
        }
        assert!(integrate_baseline_intensity(&path, &params, 11.0).is_err());
        assert!(integrate_baseline_intensity(&path, &params, -0.1).is_err());
    }

    #[test]
    fn jump_contribution_is_integrated_exactly() {
        // A single jump of total damage d at time s adds d·(t−s) to the
        // integral for t >= s, independent of the grid resolution.
        let times: Vec<f64> = crate::numerics::linspace(0.0, 10.0, 6);
        let flat0: Vec<f64> = vec![0.0; 6];
        let flat1: Vec<f64> = vec![0.0; 6];
        let jumps = vec![ShockJump {
            time: 3.3,
            damages: vec![0.7, 0.3],
        }];
        let path = DegradationPath::new(times, vec![flat0, flat1], vec![0.0, 0.0], jumps).unwrap();
        let params = FacilitationParams::new(0.01, 0.0, 0.5).unwrap();
        for &t in &[3.3, 4.0, 10.0] {
            let expect = 0.01 * t + 0.5 * (t - 3.3);
            abs_eq(
                integrate_baseline_intensity(&path, &params, t).unwrap(),
                expect,
                1e-12,
            );
        }
        // Before the jump, only the baseline accumulates.
        abs_eq(
            integrate_baseline_intensity(&path, &params, 2.0).unwrap(),
            0.02,
            1e-14,
        );
    }

    #[test]
    fn construction_rejects_malformed_inputs() {
        let times: Vec<f64> = vec![0.0, 1.0, 2.0];
        let good = vec![vec![0.0, 0.1, 0.2], vec![0.0, 0.0, 0.1]];
        assert!(DegradationPath::new(times.clone(), good.clone(), vec![0.0, 0.0], vec![]).is_ok());

        // Decreasing pure path.
        let bad = vec![vec![0.0, 0.2, 0.1], vec![0.0, 0.0, 0.1]];
        assert!(DegradationPath::new(times.clone(), bad, vec![0.0, 0.0], vec![]).is_err());

        // Grid not starting at zero.
        assert!(
            DegradationPath::new(vec![1.0, 2.0], vec![vec![0.0, 0.1]], vec![0.0], vec![]).is_err()
        );

        // Age/component mismatch.
        assert!(DegradationPath::new(times.clone(), good.clone(), vec![0.0], vec![]).is_err());

        // Jump outside the horizon.
        let jump = vec![ShockJump {
            time: 5.0,
            damages: vec![0.1, 0.1],
        }];
        assert!(DegradationPath::new(times, good, vec![0.0, 0.0], jump).is_err());
    }
}
