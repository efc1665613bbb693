//! Monte Carlo reliability estimation for degradation-fed shock rates.
//!
//! The estimator is a hybrid: per replication it samples only what the
//! closed form cannot absorb — the pure degradation paths and the shock
//! damages/times that drive the accumulated baseline intensity Λ_0 — and
//! keeps the survival probability itself analytic. Concretely, for counts
//! m = 0..=M it reuses the replication-independent factor
//!
//! A(m, t) = Π_i F_i^m · I_i(m, t)
//!
//! (hard-shock survival and the damage-mixed degradation CDF, as in the
//! closed form) and mixes it with a *sampled* count law: Λ_0(m, t) is
//! integrated along the replication's degradation path, with the m damage
//! jumps placed uniformly on (0, t). Averaging R_j(t) = Σ_m A(m, t)·pmf_j(m)
//! over replications estimates R(t).
//!
//! Because each count scenario m carries its own Λ_0(m, t), the mixture
//! weights need not sum to exactly one; the truncation audit reports the
//! worst tail mass and overshoot, and `renormalize_pmf` optionally rescales
//! the truncated weights.
//!
//! Determinism: replication j draws from a dedicated counter-based RNG
//! stream, replications are accumulated in fixed-size chunks, and chunk
//! partials are reduced in index order, so results are bitwise identical
//! for any thread count. Draw order per replication is pinned (per
//! component: all path increments; then per shock: arrival uniform, then
//! per-component damage normals), so changing η, γ, initial ages, or the
//! mode never shifts any variate, and raising `max_shocks` only appends
//! draws.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{collect_spec_violations, no_hard_failure_prob, InitialAges, SystemSpec};
use crate::real::Real;
use crate::reliability::closed::survival_factor;
use crate::reliability::curve::{CurveMethod, CurvePoint, ReliabilityCurve, TruncationAudit};
use crate::reliability::path::integral_to;
use crate::rng::ReplicationStreams;
use crate::stochastic::counting::CountPmfTable;
use crate::stochastic::{count_tail_mass, NormalParams};

/// Monte Carlo estimator settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<R> {
    /// Number of replications N (>= 1).
    pub replications: usize,
    /// Count-scenario cap M: scenarios m = 0..=M are mixed.
    pub max_shocks: u32,
    /// Number of path sampling steps over the horizon (>= 1).
    pub path_steps: usize,
    /// Strictly increasing, strictly positive evaluation times; the last
    /// entry is the sampling horizon.
    pub t_grid: Vec<R>,
    /// Master seed; replication j uses stream j.
    pub seed: u64,
    /// Acceptable count-truncation tail mass (0 < tol < 1).
    pub truncation_tolerance: R,
    /// Rescale the truncated count weights to sum to one per (t, m) mixture.
    pub renormalize_pmf: bool,
}

impl<R: Real> SimConfig<R> {
    /// Validates the configuration against a system, including an a-priori
    /// check that `max_shocks` truncation keeps the count tail below the
    /// tolerance at the largest intensity a *working* system can accumulate
    /// (X_S bounded by Σ_i H_i; realized exceedances on failed paths are
    /// reported by the truncation audit instead).
    pub fn validate(&self, system: &SystemSpec<R>) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::domain("sim config", "replications must be >= 1"));
        }
        if self.path_steps == 0 {
            return Err(Error::domain("sim config", "path_steps must be >= 1"));
        }
        if self.t_grid.is_empty() {
            return Err(Error::domain("sim config", "t_grid must not be empty"));
        }
        if !self.t_grid[0].is_finite() || self.t_grid[0] <= R::zero() {
            return Err(Error::domain(
                "sim config",
                "t_grid entries must be positive and finite",
            ));
        }
        if !self
            .t_grid
            .windows(2)
            .all(|w| w[1] > w[0] && w[1].is_finite())
        {
            return Err(Error::domain(
                "sim config",
                "t_grid must be strictly increasing and finite",
            ));
        }
        if !(self.truncation_tolerance > R::zero() && self.truncation_tolerance < R::one()) {
            return Err(Error::domain(
                "sim config",
                "truncation_tolerance must lie in (0, 1)",
            ));
        }
        let shock = system.effective_shock_params();
        let horizon = *self.t_grid.last().expect("nonempty grid");
        let sum_h: R = system.components.iter().map(|c| c.soft_threshold).sum();
        let lambda_bar = shock.lambda0 * horizon + shock.gamma * sum_h * horizon;
        let tail = count_tail_mass(self.max_shocks, lambda_bar, shock.eta)?;
        if tail >= self.truncation_tolerance {
            return Err(Error::domain(
                "sim config",
                format!(
                    "max_shocks = {} leaves count tail mass {tail:.3e} at intensity {lambda_bar:.3e} \
                     (tolerance {}); raise max_shocks",
                    self.max_shocks, self.truncation_tolerance
                ),
            ));
        }
        Ok(())
    }
}

/// Precomputed, replication-independent state for one estimation run.
struct Engine<'a, R: Real> {
    lambda0: R,
    gamma: R,
    t_grid: &'a [R],
    /// Even path grid over [0, horizon], `path_steps + 1` nodes.
    path_times: Vec<R>,
    /// A(m, t) per grid time and count scenario.
    a_table: Vec<Vec<R>>,
    pmf: CountPmfTable<R>,
    samplers: Vec<R::GammaSampler>,
    damages: Vec<NormalParams<R>>,
    sum_ages: R,
    max_shocks: usize,
    renormalize: bool,
}

/// Per-replication workspace; reused across replications of a chunk.
struct Scratch<R> {
    /// Continuous system level at each path node (pure paths + ages).
    continuous: Vec<R>,
    /// Cumulative trapezoid of `continuous`.
    cum: Vec<R>,
    /// prefix[m] = Σ_{j<=m} Y_sys,j·(1 − U_j); scenario m's jump integral
    /// over (0, t) is t·prefix[m].
    jump_prefix: Vec<R>,
    /// Count weights for the current (replication, t).
    pmf_buf: Vec<R>,
    /// R_j(t) per grid time.
    out: Vec<R>,
}

impl<R: Real> Scratch<R> {
    fn new(nodes: usize, max_shocks: usize, grid: usize) -> Self {
        Self {
            continuous: vec![R::zero(); nodes],
            cum: vec![R::zero(); nodes],
            jump_prefix: vec![R::zero(); max_shocks + 1],
            pmf_buf: vec![R::zero(); max_shocks + 1],
            out: vec![R::zero(); grid],
        }
    }
}

/// Truncation diagnostics of a single replication.
#[derive(Clone, Copy)]
struct ReplicationAudit<R> {
    tail_mass: R,
    overshoot: R,
}

impl<'a, R: Real> Engine<'a, R> {
    fn new(
        system: &'a SystemSpec<R>,
        ages: &'a InitialAges<R>,
        config: &'a SimConfig<R>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        collect_spec_violations(system, ages, &mut violations);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        config.validate(system)?;

        let shock = system.effective_shock_params();
        let horizon = *config.t_grid.last().expect("nonempty grid");
        let path_times = crate::numerics::linspace(R::zero(), horizon, config.path_steps + 1);
        let m_max = config.max_shocks as usize;

        let f_sys: R = system
            .components
            .iter()
            .map(no_hard_failure_prob)
            .try_fold(R::one(), |acc, f| f.map(|v| acc * v))?;
        let a_table: Vec<Vec<R>> = config
            .t_grid
            .iter()
            .map(|&t| {
                let mut f_pow = R::one();
                (0..=m_max)
                    .map(|m| {
                        let mut a = f_pow;
                        f_pow *= f_sys;
                        for (comp, &u) in system.components.iter().zip(&ages.0) {
                            if a == R::zero() {
                                break;
                            }
                            a *= survival_factor(comp, u, t, m as u32);
                        }
                        a
                    })
                    .collect()
            })
            .collect();

        let dt = horizon / R::of_usize(config.path_steps);
        let samplers = system
            .components
            .iter()
            .map(|c| R::gamma_sampler(c.degradation.alpha * dt, c.degradation.beta))
            .collect();
        let damages = system.components.iter().map(|c| c.damage).collect();

        Ok(Self {
            lambda0: shock.lambda0,
            gamma: shock.gamma,
            t_grid: &config.t_grid,
            path_times,
            a_table,
            pmf: CountPmfTable::new(shock.eta, config.max_shocks),
            samplers,
            damages,
            sum_ages: ages.0.iter().copied().sum(),
            max_shocks: m_max,
            renormalize: config.renormalize_pmf,
        })
    }

    /// Runs one replication, filling `scratch.out` with R_j(t) per grid
    /// time. Draw order is part of the public contract (see module docs).
    fn replicate_into<G: rand::Rng + ?Sized>(
        &self,
        rng: &mut G,
        scratch: &mut Scratch<R>,
    ) -> ReplicationAudit<R> {
        let nodes = self.path_times.len();

        // Pure degradation paths, summed into the continuous system level.
        for c in scratch.continuous.iter_mut() {
            *c = self.sum_ages;
        }
        for sampler in &self.samplers {
            let mut level = R::zero();
            for k in 1..nodes {
                level += R::sample_gamma(sampler, rng);
                scratch.continuous[k] += level;
            }
        }
        // Cumulative trapezoid of the continuous level.
        scratch.cum[0] = R::zero();
        let half = R::of(0.5);
        for k in 1..nodes {
            let h = self.path_times[k] - self.path_times[k - 1];
            scratch.cum[k] =
                scratch.cum[k - 1] + h * (scratch.continuous[k] + scratch.continuous[k - 1]) * half;
        }

        // Shock block: arrival fraction U_j, then per-component damages.
        // Scenario m uses the first m shocks at times t·U_j; the step
        // integral over (0, t) is t·Σ_{j<=m} Y_sys,j·(1 − U_j).
        scratch.jump_prefix[0] = R::zero();
        for j in 1..=self.max_shocks {
            let u = R::sample_open01(rng);
            let mut y_sys = R::zero();
            for d in &self.damages {
                let z = R::sample_standard_normal(rng);
                y_sys += d.mean + d.std * z;
            }
            scratch.jump_prefix[j] = scratch.jump_prefix[j - 1] + y_sys * (R::one() - u);
        }

        let mut missing = R::zero();
        let mut overshoot = R::zero();
        for (ti, &t) in self.t_grid.iter().enumerate() {
            let cum_t = integral_to(&self.path_times, &scratch.continuous, &scratch.cum, t);
            let base = self.lambda0 * t + self.gamma * cum_t;
            for m in 0..=self.max_shocks {
                let lam = (base + self.gamma * t * scratch.jump_prefix[m]).max(R::zero());
                scratch.pmf_buf[m] = self.pmf.pmf(m as u32, lam);
            }
            let mut r = R::zero();
            let mut total = R::zero();
            for (&a, &p) in self.a_table[ti].iter().zip(&scratch.pmf_buf) {
                r += a * p;
                total += p;
            }
            if self.renormalize && total > R::zero() {
                r /= total;
            }
            // The weight row need not sum to one: each scenario m carries
            // its own Λ_0, and the cap at M truncates. Log how much mass
            // the row is missing (truncation side) and how far the raw
            // mixture exceeded one (over-coverage side, pre-clamp).
            let miss = R::one() - total;
            if miss > missing {
                missing = miss;
            }
            if r - R::one() > overshoot {
                overshoot = r - R::one();
            }
            scratch.out[ti] = crate::numerics::clamp_probability(r);
        }

        ReplicationAudit {
            tail_mass: missing.max(R::zero()),
            overshoot: overshoot.max(R::zero()),
        }
    }
}

/// Reliability R_j(t) on the configured grid from a single replication
/// driven by `rng`.
///
/// This rebuilds the engine's precomputed tables on every call; it exists
/// for tests and diagnostics. Use [`estimate_reliability_curve`] for
/// production runs.
pub fn replication_reliability<R: Real, G: rand::Rng + ?Sized>(
    system: &SystemSpec<R>,
    ages: &InitialAges<R>,
    config: &SimConfig<R>,
    rng: &mut G,
) -> Result<Vec<R>> {
    let engine = Engine::new(system, ages, config)?;
    let mut scratch = Scratch::new(
        engine.path_times.len(),
        engine.max_shocks,
        config.t_grid.len(),
    );
    engine.replicate_into(rng, &mut scratch);
    Ok(scratch.out)
}

/// Replications per accumulation chunk. Fixed so that the reduction tree —
/// and therefore every output bit — is independent of thread count.
const CHUNK: usize = 64;

/// Per-chunk running statistics (Welford), merged in chunk order.
struct ChunkStats<R> {
    n: usize,
    mean: Vec<R>,
    m2: Vec<R>,
    max_tail: R,
    max_overshoot: R,
}

impl<R: Real> ChunkStats<R> {
    fn new(grid: usize) -> Self {
        Self {
            n: 0,
            mean: vec![R::zero(); grid],
            m2: vec![R::zero(); grid],
            max_tail: R::zero(),
            max_overshoot: R::zero(),
        }
    }

    fn update(&mut self, values: &[R], audit: ReplicationAudit<R>) {
        self.n += 1;
        let n = R::of_usize(self.n);
        for (k, &x) in values.iter().enumerate() {
            let d = x - self.mean[k];
            self.mean[k] += d / n;
            self.m2[k] += d * (x - self.mean[k]);
        }
        if audit.tail_mass > self.max_tail {
            self.max_tail = audit.tail_mass;
        }
        if audit.overshoot > self.max_overshoot {
            self.max_overshoot = audit.overshoot;
        }
    }

    fn merge(&mut self, other: &ChunkStats<R>) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            self.n = other.n;
            self.mean.clone_from(&other.mean);
            self.m2.clone_from(&other.m2);
            self.max_tail = other.max_tail;
            self.max_overshoot = other.max_overshoot;
            return;
        }
        let na = R::of_usize(self.n);
        let nb = R::of_usize(other.n);
        let n_total = na + nb;
        for k in 0..self.mean.len() {
            let delta = other.mean[k] - self.mean[k];
            self.mean[k] += delta * nb / n_total;
            self.m2[k] += other.m2[k] + delta * delta * na * nb / n_total;
        }
        self.n += other.n;
        if other.max_tail > self.max_tail {
            self.max_tail = other.max_tail;
        }
        if other.max_overshoot > self.max_overshoot {
            self.max_overshoot = other.max_overshoot;
        }
    }
}

/// Estimates the reliability curve on `config.t_grid` by averaging
/// `config.replications` hybrid replications.
///
/// The returned curve starts with an exact t = 0 point (closed form: 1 if
/// every component starts below its threshold, else 0) followed by one
/// Monte Carlo point per grid time.
pub fn estimate_reliability_curve<R: Real>(
    system: &SystemSpec<R>,
    ages: &InitialAges<R>,
    config: &SimConfig<R>,
) -> Result<ReliabilityCurve<R>> {
    let engine = Engine::new(system, ages, config)?;
    let streams = ReplicationStreams::new(config.seed);
    let n = config.replications;
    let grid = config.t_grid.len();
    let chunks = n.div_ceil(CHUNK);

    let partials: Vec<ChunkStats<R>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stats = ChunkStats::new(grid);
            let mut scratch = Scratch::new(engine.path_times.len(), engine.max_shocks, grid);
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            for j in lo..hi {
                let mut rng = streams.stream(j as u64);
                let audit = engine.replicate_into(&mut rng, &mut scratch);
                stats.update(&scratch.out, audit);
            }
            stats
        })
        .collect();

    let mut total = ChunkStats::new(grid);
    for p in &partials {
        total.merge(p);
    }

    let mut points = Vec::with_capacity(grid + 1);
    let alive = ages
        .0
        .iter()
        .zip(&system.components)
        .all(|(&u, c)| u < c.soft_threshold);
    points.push(CurvePoint {
        t: R::zero(),
        reliability: if alive { R::one() } else { R::zero() },
        std_error: R::zero(),
        method: CurveMethod::ClosedForm,
    });
    let nf = R::of_usize(n);
    for (k, &t) in config.t_grid.iter().enumerate() {
        let std_error = if n >= 2 {
            (total.m2[k].max(R::zero()) / (nf - R::one()) / nf).sqrt()
        } else {
            R::zero()
        };
        points.push(CurvePoint {
            t,
            reliability: total.mean[k],
            std_error,
            method: CurveMethod::MonteCarlo,
        });
    }

    Ok(ReliabilityCurve {
        points,
        seed: config.seed,
        replications: n,
        audit: TruncationAudit {
            max_tail_mass: total.max_tail,
            max_overshoot: total.max_overshoot,
            renormalized: config.renormalize_pmf,
        },
    })
}
