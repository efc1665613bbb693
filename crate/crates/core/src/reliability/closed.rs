//! Closed-form reliability for shock rates that do not depend on the
//! degradation state (γ = 0).
//!
//! Conditioning on the shock count m, a component with margin H − u
//! survives when no shock magnitude exceeds D (probability F^m with
//! F = Φ((D − μ_W)/σ_W)), and the continuous degradation stays below the
//! margin left by the damage total:
//!
//! I(m, t) = ∫ G(H − u − y; α·t, β) f_{Y,m}(y) dy
//!
//! with G the gamma marginal CDF and f_{Y,m} the m-fold damage density. The
//! component reliability is Σ_m F^m·I(m, t)·P(N(t) = m), and a series
//! system multiplies the per-component factors inside the sum. With γ = 0
//! the count law is path-independent, so P(N(t) = m) uses Λ_0 = λ_0·t.

use crate::error::{Error, Result};
use crate::model::{no_hard_failure_prob, ComponentSpec, InitialAges, SystemSpec};
use crate::numerics::{adaptive_simpson, clamp_probability};
use crate::real::Real;
use crate::special::{regularized_gamma_p, std_normal_pdf};
use crate::stochastic::{count_pmf, damage_sum, DamageSum, FacilitationParams};

/// Absolute tolerance for the damage-mixture quadrature.
const QUAD_TOL: f64 = 1e-9;

/// How many standard deviations of the damage total the quadrature covers.
const QUAD_SIGMAS: f64 = 8.0;

/// P(component survives to t | m shocks, soft failure only): the damage
/// mixture of the gamma marginal CDF over the remaining margin.
pub(crate) fn survival_factor<R: Real>(comp: &ComponentSpec<R>, u: R, t: R, m: u32) -> R {
    let margin = comp.soft_threshold - u;
    if margin <= R::zero() {
        return R::zero();
    }
    let alpha_t = comp.degradation.alpha * t;
    let beta = comp.degradation.beta;
    // Gamma CDF of the margin left after damage y; shape 0 (t = 0) is the
    // unit step at zero degradation.
    let deg_cdf = |rest: R| -> R {
        if rest <= R::zero() {
            R::zero()
        } else if alpha_t == R::zero() {
            R::one()
        } else {
            regularized_gamma_p(alpha_t, beta * rest)
        }
    };
    match damage_sum(m, &comp.damage) {
        DamageSum::PointMass(at) => deg_cdf(margin - at),
        DamageSum::Gaussian { mean, std } => {
            let sig = R::of(QUAD_SIGMAS) * std;
            let lo = mean - sig;
            let hi = (mean + sig).min(margin);
            if hi <= lo {
                return R::zero();
            }
            let integrand = |y: R| deg_cdf(margin - y) * std_normal_pdf((y - mean) / std) / std;
            let v = adaptive_simpson(&integrand, lo, hi, R::of(QUAD_TOL));
            clamp_probability(v)
        }
    }
}

/// Path-independent count pmf for m = 0..: P(N(t) = m) with Λ_0 = λ_0·t.
///
/// The vector extends until the remaining tail mass drops below `tail_tol`
/// or `cap` entries are reached, whichever comes first.
pub fn path_independent_pmf<R: Real>(
    shock: &FacilitationParams<R>,
    t: R,
    tail_tol: R,
    cap: usize,
) -> Result<Vec<R>> {
    if t < R::zero() || !t.is_finite() {
        return Err(Error::domain(
            "path_independent_pmf",
            format!("t must be nonnegative and finite (got {t})"),
        ));
    }
    let lambda = shock.lambda0 * t;
    let mut out = Vec::new();
    let mut cum = R::zero();
    for m in 0..cap.max(1) {
        let p = count_pmf(m as u32, lambda, shock.eta)?;
        out.push(p);
        cum += p;
        if R::one() - cum < tail_tol {
            break;
        }
    }
    Ok(out)
}

fn check_time<R: Real>(t: R, context: &'static str) -> Result<()> {
    if t < R::zero() || !t.is_finite() {
        return Err(Error::domain(
            context,
            format!("t must be nonnegative and finite (got {t})"),
        ));
    }
    Ok(())
}

/// Closed-form reliability of a single component at time `t` with initial
/// offset `u`, mixing over the supplied count pmf (entry m = P(N(t) = m)).
pub fn component_reliability_closed<R: Real>(
    t: R,
    u: R,
    comp: &ComponentSpec<R>,
    pmf: &[R],
) -> Result<R> {
    check_time(t, "component_reliability_closed")?;
    if u < R::zero() || !u.is_finite() {
        return Err(Error::domain(
            "component_reliability_closed",
            format!("initial offset must be nonnegative and finite (got {u})"),
        ));
    }
    if pmf.is_empty() {
        return Err(Error::domain(
            "component_reliability_closed",
            "count pmf must not be empty",
        ));
    }
    let f = no_hard_failure_prob(comp)?;
    let mut total = R::zero();
    let mut f_pow = R::one();
    for (m, &p) in pmf.iter().enumerate() {
        if p > R::zero() {
            total += f_pow * survival_factor(comp, u, t, m as u32) * p;
        }
        f_pow *= f;
    }
    Ok(clamp_probability(total))
}

/// Closed-form series-system reliability at time `t`.
///
/// Only valid when the effective shock rate does not feed on degradation
/// (γ = 0, i.e. Poisson mode or a facilitation model with γ = 0); returns
/// `UnsupportedMode` otherwise — use the Monte Carlo estimator there.
pub fn system_reliability_closed<R: Real>(
    t: R,
    ages: &InitialAges<R>,
    system: &SystemSpec<R>,
) -> Result<R> {
    check_time(t, "system_reliability_closed")?;
    let mut violations = Vec::new();
    crate::model::collect_spec_violations(system, ages, &mut violations);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let shock = system.effective_shock_params();
    if shock.gamma > R::zero() {
        return Err(Error::UnsupportedMode(
            "closed-form reliability requires a degradation-independent shock rate (gamma = 0)"
                .into(),
        ));
    }
    let pmf = path_independent_pmf(&shock, t, R::of(1e-12), 200_000)?;
    let f_sys: R = system
        .components
        .iter()
        .map(no_hard_failure_prob)
        .try_fold(R::one(), |acc, f| f.map(|v| acc * v))?;
    let mut total = R::zero();
    let mut f_pow = R::one();
    for (m, &p) in pmf.iter().enumerate() {
        if p > R::zero() {
            let mut prod = f_pow * p;
            for (comp, &u) in system.components.iter().zip(&ages.0) {
                if prod == R::zero() {
                    break;
                }
                prod *= survival_factor(comp, u, t, m as u32);
            }
            total += prod;
        }
        f_pow *= f_sys;
    }
    Ok(clamp_probability(total))
}
