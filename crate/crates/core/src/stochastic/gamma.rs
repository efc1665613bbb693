//! Gamma-process degradation: marginal CDF, path sampling, and maximum
//! likelihood fitting from increment data.
//!
//! A gamma process with shape rate α and rate parameter β has independent
//! increments X(t+dt) − X(t) ~ Gamma(α·dt, β) with density
//! β^{α dt} x^{α dt − 1} e^{−βx} / Γ(α dt). β is a *rate*: the mean path is
//! α·t/β and larger β means slower degradation. (The scale parameterization
//! used by some libraries is 1/β.)

use rand::Rng;

use crate::error::{Error, Result, Violation};
use crate::numerics::clamp_probability;
use crate::real::Real;
use crate::special::{digamma, ln_gamma, regularized_gamma_p, trigamma};

/// Shape rate and rate parameter of a gamma degradation process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaProcessParams<R> {
    /// Shape accumulated per unit time (α > 0).
    pub alpha: R,
    /// Rate parameter (β > 0); the mean degradation path is α·t/β.
    pub beta: R,
}

impl<R: Real> GammaProcessParams<R> {
    pub fn new(alpha: R, beta: R) -> Result<Self> {
        let p = Self { alpha, beta };
        let mut violations = Vec::new();
        p.validate("gamma process", &mut violations);
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::Validation(violations))
        }
    }

    /// Mean degradation level at time `t`.
    pub fn mean_at(&self, t: R) -> R {
        self.alpha * t / self.beta
    }

    /// Marginal variance at time `t`.
    pub fn variance_at(&self, t: R) -> R {
        self.alpha * t / (self.beta * self.beta)
    }

    pub(crate) fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if !(self.alpha > R::zero()) || !self.alpha.is_finite() {
            out.push(Violation::new(
                format!("{path}.alpha"),
                format!(
                    "shape rate must be positive and finite (got {})",
                    self.alpha
                ),
            ));
        }
        if !(self.beta > R::zero()) || !self.beta.is_finite() {
            out.push(Violation::new(
                format!("{path}.beta"),
                format!(
                    "rate parameter must be positive and finite (got {})",
                    self.beta
                ),
            ));
        }
    }
}

/// CDF of a Gamma(shape, rate) marginal at `x`: P(shape, rate·x).
///
/// `x` may be any finite value (mass below 0 is zero); `shape` and `rate`
/// must be positive and finite.
pub fn gamma_cdf<R: Real>(x: R, shape: R, rate: R) -> Result<R> {
    if !(shape > R::zero()) || !shape.is_finite() {
        return Err(Error::domain(
            "gamma_cdf",
            format!("shape must be positive and finite (got {shape})"),
        ));
    }
    if !(rate > R::zero()) || !rate.is_finite() {
        return Err(Error::domain(
            "gamma_cdf",
            format!("rate must be positive and finite (got {rate})"),
        ));
    }
    if x.is_nan() {
        return Err(Error::domain("gamma_cdf", "x is NaN"));
    }
    if x <= R::zero() {
        return Ok(R::zero());
    }
    Ok(clamp_probability(regularized_gamma_p(shape, rate * x)))
}

/// A sampled degradation path on an even time grid; `values[k]` is the
/// cumulative degradation at `times[k]`, starting from X(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaPath<R> {
    pub times: Vec<R>,
    pub values: Vec<R>,
}

impl<R: Real> GammaPath<R> {
    /// Final time covered by the path.
    pub fn horizon(&self) -> R {
        *self.times.last().expect("paths are never empty")
    }

    /// Path value at `t` by linear interpolation (clamped to the ends).
    pub fn value_at(&self, t: R) -> R {
        crate::numerics::interp_linear(&self.times, &self.values, t)
    }
}

/// Samples a gamma-process path on `steps` even increments over
/// `[0, horizon]` by drawing independent Gamma(α·Δt, β) increments.
///
/// `horizon == 0` yields the single-point path X(0) = 0; otherwise
/// `horizon` must be positive and finite, and `steps >= 1`.
pub fn sample_gamma_path<R: Real, G: Rng + ?Sized>(
    params: &GammaProcessParams<R>,
    horizon: R,
    steps: usize,
    rng: &mut G,
) -> Result<GammaPath<R>> {
    let mut violations = Vec::new();
    params.validate("params", &mut violations);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    if horizon < R::zero() || !horizon.is_finite() {
        return Err(Error::domain(
            "sample_gamma_path",
            format!("horizon must be nonnegative and finite (got {horizon})"),
        ));
    }
    if horizon == R::zero() {
        return Ok(GammaPath {
            times: vec![R::zero()],
            values: vec![R::zero()],
        });
    }
    if steps == 0 {
        return Err(Error::domain(
            "sample_gamma_path",
            "a positive horizon needs at least one step",
        ));
    }
    let dt = horizon / R::of_usize(steps);
    let sampler = R::gamma_sampler(params.alpha * dt, params.beta);
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    times.push(R::zero());
    values.push(R::zero());
    let mut level = R::zero();
    for k in 1..=steps {
        level += R::sample_gamma(&sampler, rng);
        times.push(if k == steps {
            horizon
        } else {
            dt * R::of_usize(k)
        });
        values.push(level);
    }
    Ok(GammaPath { times, values })
}

/// One observed increment of a degradation path: the level rose by `dx`
/// over an interval of length `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementObservation<R> {
    pub dt: R,
    pub dx: R,
}

impl<R: Real> IncrementObservation<R> {
    /// Requires `dt > 0` and `dx >= 0`, both finite.
    pub fn new(dt: R, dx: R) -> Result<Self> {
        if !(dt > R::zero()) || !dt.is_finite() {
            return Err(Error::domain(
                "increment observation",
                format!("dt must be positive and finite (got {dt})"),
            ));
        }
        if dx < R::zero() || !dx.is_finite() {
            return Err(Error::domain(
                "increment observation",
                format!("dx must be nonnegative and finite (got {dx})"),
            ));
        }
        Ok(Self { dt, dx })
    }
}

/// Maximum-likelihood estimate of gamma-process parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit<R> {
    pub alpha: R,
    pub beta: R,
    pub log_likelihood: R,
    /// Euclidean norm of the log-likelihood gradient at the estimate.
    pub gradient_norm: R,
    pub iterations: usize,
}

/// Parses increment observations from CSV text with header `dt,dx`.
pub fn parse_increments_csv<R: Real>(text: &str) -> Result<Vec<IncrementObservation<R>>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("increment CSV", "empty input"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["dt", "dx"] {
        return Err(Error::parse(
            "increment CSV",
            format!("expected header 'dt,dx', got '{}'", header.trim()),
        ));
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                "increment CSV",
                format!("line {}: expected 2 fields, got {}", idx + 1, fields.len()),
            ));
        }
        let dt = R::parse_decimal(fields[0]).ok_or_else(|| {
            Error::parse(
                "increment CSV",
                format!("line {}: bad dt value '{}'", idx + 1, fields[0]),
            )
        })?;
        let dx = R::parse_decimal(fields[1]).ok_or_else(|| {
            Error::parse(
                "increment CSV",
                format!("line {}: bad dx value '{}'", idx + 1, fields[1]),
            )
        })?;
        out.push(IncrementObservation::new(dt, dx)?);
    }
    Ok(out)
}

/// Log-likelihood of increment data under Gamma(α·dt_k, β) increments.
fn log_likelihood<R: Real>(data: &[IncrementObservation<R>], alpha: R, beta: R) -> R {
    let lnb = beta.ln();
    let mut ll = R::zero();
    for obs in data {
        let a = alpha * obs.dt;
        ll += a * lnb + (a - R::one()) * obs.dx.ln() - beta * obs.dx - ln_gamma(a);
    }
    ll
}

/// Profile gradient g(α) = ∂ℓ/∂α evaluated at β̂(α) = α·T/X.
///
/// g is strictly decreasing with g(0+) = +∞ and g(∞) < 0 for any
/// non-degenerate data set, so it has a unique root.
fn profile_gradient<R: Real>(
    data: &[IncrementObservation<R>],
    total_dt: R,
    total_dx: R,
    weighted_ln_dx: R,
    alpha: R,
) -> R {
    let mut psi_sum = R::zero();
    for obs in data {
        psi_sum += obs.dt * digamma(alpha * obs.dt);
    }
    total_dt * (alpha * total_dt / total_dx).ln() + weighted_ln_dx - psi_sum
}

fn profile_gradient_derivative<R: Real>(
    data: &[IncrementObservation<R>],
    total_dt: R,
    alpha: R,
) -> R {
    let mut acc = total_dt / alpha;
    for obs in data {
        acc -= obs.dt * obs.dt * trigamma(alpha * obs.dt);
    }
    acc
}

/// Fits gamma-process parameters (α, β) to increment observations by
/// maximum likelihood.
///
/// The rate is concentrated out analytically (β̂ = α̂·Σdt/Σdx) and the
/// remaining one-dimensional score equation in α is solved by a
/// bracketed Newton iteration seeded from the method of moments.
///
/// Errors: fewer than two observations, any zero increment (the likelihood
/// is unbounded there), or increments with zero sample variance about the
/// fitted mean rate (α is then unidentifiable).
pub fn fit_gamma_process<R: Real>(data: &[IncrementObservation<R>]) -> Result<GammaFit<R>> {
    if data.len() < 2 {
        return Err(Error::domain(
            "fit_gamma_process",
            format!("need at least 2 observations, got {}", data.len()),
        ));
    }
    if data.iter().all(|o| o.dx == R::zero()) {
        return Err(Error::Unidentifiable(
            "all increments are zero; no degradation signal to fit".into(),
        ));
    }
    if data.iter().any(|o| o.dx <= R::zero()) {
        return Err(Error::Unidentifiable(
            "zero increments make the gamma likelihood unbounded; drop them or merge intervals"
                .into(),
        ));
    }

    let total_dt: R = data.iter().map(|o| o.dt).sum();
    let total_dx: R = data.iter().map(|o| o.dx).sum();
    let weighted_ln_dx: R = data.iter().map(|o| o.dt * o.dx.ln()).sum();

    // Method-of-moments start: match the mean rate and the increment
    // variance. Zero residual variance means dx/dt is constant, which pins
    // the mean but leaves α free.
    let mean_rate = total_dx / total_dt;
    let ss: R = data
        .iter()
        .map(|o| {
            let r = o.dx - mean_rate * o.dt;
            r * r
        })
        .sum();
    let scale: R = data.iter().map(|o| o.dx * o.dx).sum();
    if ss <= scale * R::of(1e-24) {
        return Err(Error::Unidentifiable(
            "increments have zero sample variance about the mean rate; \
             the shape parameter is unidentifiable"
                .into(),
        ));
    }
    let beta0 = total_dx / ss;
    let alpha0 = (mean_rate * beta0).max(R::of(1e-8)).min(R::of(1e8));

    let g = |alpha: R| profile_gradient(data, total_dt, total_dx, weighted_ln_dx, alpha);

    // Bracket the root: g is strictly decreasing.
    let mut lo = alpha0;
    let mut hi = alpha0;
    let mut iterations = 0usize;
    const MAX_ITER: usize = 200;
    while g(lo) <= R::zero() {
        hi = lo;
        lo *= R::of(0.25);
        iterations += 1;
        if iterations > MAX_ITER || lo < R::of(1e-250) {
            return Err(Error::NoConvergence {
                iterations,
                residual: g(lo).as_f64(),
            });
        }
    }
    while g(hi) >= R::zero() {
        hi *= R::of(4.0);
        iterations += 1;
        if iterations > MAX_ITER || hi > R::of(1e250) {
            return Err(Error::NoConvergence {
                iterations,
                residual: g(hi).as_f64(),
            });
        }
    }

    // Newton with bisection fallback inside the bracket.
    let tol = R::of(1e-9) * total_dt.max(R::one());
    let mut alpha = ((lo * hi).sqrt()).max(lo).min(hi);
    let mut value = g(alpha);
    while value.abs() > tol && iterations < MAX_ITER {
        iterations += 1;
        if value > R::zero() {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let slope = profile_gradient_derivative(data, total_dt, alpha);
        let mut next = alpha - value / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = (lo + hi) * R::of(0.5);
        }
        if next == alpha {
            break;
        }
        alpha = next;
        value = g(alpha);
    }
    if value.abs() > R::of(1e-6) * total_dt.max(R::one()) {
        return Err(Error::NoConvergence {
            iterations,
            residual: value.as_f64(),
        });
    }

    let beta = alpha * total_dt / total_dx;
    // ∂ℓ/∂β at the concentrated rate is α·T/β − X = 0 up to rounding.
    let grad_beta = alpha * total_dt / beta - total_dx;
    let gradient_norm = (value * value + grad_beta * grad_beta).sqrt();
    Ok(GammaFit {
        alpha,
        beta,
        log_likelihood: log_likelihood(data, alpha, beta),
        gradient_norm,
        iterations,
    })
}
