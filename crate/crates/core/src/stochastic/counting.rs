//! Facilitated shock counting process.
//!
//! Shocks arrive with intensity λ_j(t) = (1 + η·j)·λ_0(t), where j is the
//! number of shocks so far: each arrival *facilitates* the next. λ_0(t) is a
//! baseline intensity path (possibly fed by system degradation) and η >= 0
//! is the facilitation strength. With Λ_0 = ∫_0^t λ_0(v) dv, the count at
//! time t is negative-binomially distributed:
//!
//! P(N = m) = C(1/η + m − 1, m) · (1 − e^{−ηΛ_0})^m · e^{−Λ_0}
//!
//! which collapses to Poisson(Λ_0) as η → 0. For ηΛ_0 large the law has a
//! very heavy tail (mean (e^{ηΛ_0} − 1)/η), so finite truncations must be
//! sized accordingly.

use rand::Rng;

use crate::error::{Error, Result, Violation};
use crate::real::Real;
use crate::special::ln_gamma;

/// Shock-arrival model parameters: baseline rate λ_0, facilitation strength
/// η, and degradation feedback coefficient γ (the baseline intensity seen by
/// the system is λ_0 + γ·X_S(t)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacilitationParams<R> {
    pub lambda0: R,
    pub eta: R,
    pub gamma: R,
}

impl<R: Real> FacilitationParams<R> {
    pub fn new(lambda0: R, eta: R, gamma: R) -> Result<Self> {
        let p = Self {
            lambda0,
            eta,
            gamma,
        };
        let mut violations = Vec::new();
        p.validate("shock model", &mut violations);
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::Validation(violations))
        }
    }

    /// Plain Poisson arrivals: no facilitation, no degradation feedback.
    pub fn poisson(lambda0: R) -> Result<Self> {
        Self::new(lambda0, R::zero(), R::zero())
    }

    pub fn is_poisson(&self) -> bool {
        self.eta == R::zero() && self.gamma == R::zero()
    }

    pub(crate) fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if !(self.lambda0 > R::zero()) || !self.lambda0.is_finite() {
            out.push(Violation::new(
                format!("{path}.lambda0"),
                format!(
                    "baseline rate must be positive and finite (got {})",
                    self.lambda0
                ),
            ));
        }
        if self.eta < R::zero() || !self.eta.is_finite() {
            out.push(Violation::new(
                format!("{path}.eta"),
                format!(
                    "facilitation strength must be nonnegative and finite (got {})",
                    self.eta
                ),
            ));
        }
        if self.gamma < R::zero() || !self.gamma.is_finite() {
            out.push(Violation::new(
                format!("{path}.gamma"),
                format!(
                    "degradation feedback must be nonnegative and finite (got {})",
                    self.gamma
                ),
            ));
        }
    }
}

/// Poisson pmf e^{−λ} λ^m / m!, evaluated in log space.
pub fn poisson_pmf<R: Real>(m: u32, lambda: R) -> R {
    if lambda == R::zero() {
        return if m == 0 { R::one() } else { R::zero() };
    }
    if m == 0 {
        return (-lambda).exp();
    }
    let mf = R::of(m as f64);
    (mf * lambda.ln() - lambda - ln_gamma(mf + R::one())).exp()
}

/// P(N = m) for the facilitated count with accumulated baseline intensity
/// `lambda0_accum` = Λ_0 and facilitation strength `eta`.
///
/// `eta == 0` takes the exact Poisson branch. Requires Λ_0 >= 0 and η >= 0,
/// both finite.
pub fn count_pmf<R: Real>(m: u32, lambda0_accum: R, eta: R) -> Result<R> {
    if lambda0_accum < R::zero() || !lambda0_accum.is_finite() {
        return Err(Error::domain(
            "count_pmf",
            format!("accumulated intensity must be nonnegative and finite (got {lambda0_accum})"),
        ));
    }
    if eta < R::zero() || !eta.is_finite() {
        return Err(Error::domain(
            "count_pmf",
            format!("facilitation strength must be nonnegative and finite (got {eta})"),
        ));
    }
    if eta == R::zero() {
        return Ok(poisson_pmf(m, lambda0_accum));
    }
    if lambda0_accum == R::zero() {
        return Ok(if m == 0 { R::one() } else { R::zero() });
    }
    if m == 0 {
        // (e^{−ηΛ})^{1/η} written directly as e^{−Λ}: exact, no roundtrip
        // through the reciprocal.
        return Ok((-lambda0_accum).exp());
    }
    let r = eta.recip();
    let mf = R::of(m as f64);
    // 1 − e^{−ηΛ} via expm1 keeps precision for small ηΛ.
    let one_minus_q = -(-eta * lambda0_accum).exp_m1();
    if one_minus_q <= R::zero() {
        return Ok(R::zero());
    }
    let ln_pmf = ln_gamma(r + mf) - ln_gamma(mf + R::one()) - ln_gamma(r) + mf * one_minus_q.ln()
        - lambda0_accum;
    Ok(ln_pmf.exp())
}

/// Tail mass P(N > m_max) under the facilitated count law, by complementing
/// the partial sum.
pub fn count_tail_mass<R: Real>(m_max: u32, lambda0_accum: R, eta: R) -> Result<R> {
    let mut sum = R::zero();
    for m in 0..=m_max {
        sum += count_pmf(m, lambda0_accum, eta)?;
    }
    Ok((R::one() - sum).max(R::zero()))
}

/// Precomputed log-binomial terms so the Monte Carlo engine can evaluate the
/// count pmf for m = 0..=m_max against many different Λ_0 values cheaply.
#[derive(Debug, Clone)]
pub(crate) struct CountPmfTable<R> {
    eta: R,
    /// ln C(1/η + m − 1, m) per m (empty when η == 0).
    ln_binom: Vec<R>,
    /// ln m! per m, for the Poisson branch.
    ln_factorial: Vec<R>,
}

impl<R: Real> CountPmfTable<R> {
    pub fn new(eta: R, m_max: u32) -> Self {
        let mut ln_factorial = Vec::with_capacity(m_max as usize + 1);
        for m in 0..=m_max {
            let mf = R::of(m as f64);
            ln_factorial.push(ln_gamma(mf + R::one()));
        }
        let ln_binom = if eta > R::zero() {
            let r = eta.recip();
            let lg_r = ln_gamma(r);
            (0..=m_max)
                .map(|m| {
                    let mf = R::of(m as f64);
                    ln_gamma(r + mf) - ln_factorial[m as usize] - lg_r
                })
                .collect()
        } else {
            Vec::new()
        };
        Self {
            eta,
            ln_binom,
            ln_factorial,
        }
    }

    /// pmf at count `m` given accumulated baseline intensity Λ_0; matches
    /// [`count_pmf`] to rounding.
    #[inline]
    pub fn pmf(&self, m: u32, lambda0_accum: R) -> R {
        if lambda0_accum <= R::zero() {
            return if m == 0 { R::one() } else { R::zero() };
        }
        let idx = m as usize;
        if self.eta == R::zero() {
            if m == 0 {
                return (-lambda0_accum).exp();
            }
            let mf = R::of(m as f64);
            return (mf * lambda0_accum.ln() - lambda0_accum - self.ln_factorial[idx]).exp();
        }
        if m == 0 {
            return (-lambda0_accum).exp();
        }
        let one_minus_q = -(-self.eta * lambda0_accum).exp_m1();
        if one_minus_q <= R::zero() {
            return R::zero();
        }
        let mf = R::of(m as f64);
        (self.ln_binom[idx] + mf * one_minus_q.ln() - lambda0_accum).exp()
    }
}

/// Guard against facilitation blow-up in event-driven simulation.
const MAX_SIMULATED_EVENTS: usize = 10_000_000;

/// Simulates shock arrival times on `[0, horizon]` by thinning.
///
/// `baseline` supplies the full baseline intensity λ_0(t) (any degradation
/// feedback already folded in) and `baseline_sup` must bound it from above
/// on the horizon; `params.eta` sets the facilitation. The proposal rate for
/// the (j+1)-th event is (1 + η·j)·`baseline_sup`, and proposals are
/// accepted with probability λ_0(t)/`baseline_sup`, which makes the
/// simulation exact. A constant baseline (`baseline_sup` equal to it) never
/// rejects.
pub fn simulate_count_process<R: Real, G: Rng + ?Sized, B: Fn(R) -> R>(
    params: &FacilitationParams<R>,
    baseline: B,
    baseline_sup: R,
    horizon: R,
    rng: &mut G,
) -> Result<Vec<R>> {
    if params.eta < R::zero() || !params.eta.is_finite() {
        return Err(Error::domain(
            "simulate_count_process",
            format!(
                "facilitation strength must be nonnegative (got {})",
                params.eta
            ),
        ));
    }
    if !(horizon > R::zero()) || !horizon.is_finite() {
        return Err(Error::domain(
            "simulate_count_process",
            format!("horizon must be positive and finite (got {horizon})"),
        ));
    }
    if baseline_sup < R::zero() || !baseline_sup.is_finite() {
        return Err(Error::domain(
            "simulate_count_process",
            format!("baseline bound must be nonnegative and finite (got {baseline_sup})"),
        ));
    }
    let mut events: Vec<R> = Vec::new();
    if baseline_sup == R::zero() {
        return Ok(events);
    }
    let slack = R::one() + R::of(1e-9);
    let mut t = R::zero();
    loop {
        let bound = (R::one() + params.eta * R::of_usize(events.len())) * baseline_sup;
        t += R::sample_exp1(rng) / bound;
        if t > horizon {
            return Ok(events);
        }
        let lam = baseline(t);
        if lam < R::zero() || lam > baseline_sup * slack || !lam.is_finite() {
            return Err(Error::domain(
                "simulate_count_process",
                format!("baseline intensity {lam} at t={t} violates the bound {baseline_sup}"),
            ));
        }
        if R::sample_open01(rng) * baseline_sup <= lam {
            events.push(t);
            if events.len() >= MAX_SIMULATED_EVENTS {
                return Err(Error::domain(
                    "simulate_count_process",
                    "event count exploded past 1e7; facilitation too strong for this horizon",
                ));
            }
        }
    }
}
