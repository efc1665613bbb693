//! Periodic-inspection planning on top of estimated reliability curves.
//!
//! A system is inspected every τ time units; an inspection costs C_I, a
//! failed system found at inspection is replaced for C_R, and every unit of
//! time spent in the failed state before the inspection accrues downtime
//! cost at rate C_ρ. With R(t) the system reliability, the expected downtime
//! within one cycle is
//!
//! E[ρ](τ) = ∫_0^τ (1 − R(t)) dt
//!
//! and the long-run expected cost per unit time of the policy is
//!
//! CR(τ) = (C_I + C_R·(1 − R(τ)) + C_ρ·E[ρ](τ)) / τ.
//!
//! [`optimize_inspection`] estimates one reliability curve whose grid is the
//! τ candidate grid, evaluates CR on it, and optionally refines the grid
//! around the incumbent minimizer. All candidates share one master seed, so
//! comparisons across ages, modes, and cost scalings ride on common random
//! numbers.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{CostModel, InitialAges, ShockMode, SystemSpec};
use crate::numerics::{cumulative_trapezoid, logspace};
use crate::real::Real;
use crate::reliability::curve::{ReliabilityCurve, TruncationAudit};
use crate::reliability::monte_carlo::{estimate_reliability_curve, SimConfig};
use crate::reliability::path::integral_to;

/// Log-spaced candidate grid for the inspection interval τ.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGrid<R> {
    pub tau_min: R,
    pub tau_max: R,
    /// Number of candidate points (>= 2).
    pub steps: usize,
    /// Run one local refinement pass that halves the grid step around the
    /// coarse minimizer.
    pub refine: bool,
}

impl<R: Real> TauGrid<R> {
    pub fn new(tau_min: R, tau_max: R, steps: usize, refine: bool) -> Result<Self> {
        if !(tau_min > R::zero()) || !tau_min.is_finite() {
            return Err(Error::domain(
                "tau grid",
                format!("tau_min must be positive and finite (got {tau_min})"),
            ));
        }
        if !(tau_max > tau_min) || !tau_max.is_finite() {
            return Err(Error::domain(
                "tau grid",
                format!("tau_max must exceed tau_min (got {tau_min}..{tau_max})"),
            ));
        }
        if steps < 2 {
            return Err(Error::domain("tau grid", "steps must be >= 2"));
        }
        Ok(Self {
            tau_min,
            tau_max,
            steps,
            refine,
        })
    }

    /// The log-spaced candidate points, `steps` of them, endpoints included.
    pub fn points(&self) -> Vec<R> {
        logspace(self.tau_min, self.tau_max, self.steps)
    }
}

/// Expected downtime per cycle, E[ρ](τ) = ∫_0^τ (1 − R(t)) dt, on the
/// piecewise-linear interpolant of the curve. A curve that starts after
/// t = 0 is extended flat to the left; `tau` must not exceed the last
/// curve time.
pub fn expected_downtime<R: Real>(curve: &ReliabilityCurve<R>, tau: R) -> Result<R> {
    if !(tau >= R::zero()) || !tau.is_finite() {
        return Err(Error::domain(
            "expected_downtime",
            format!("tau must be nonnegative and finite (got {tau})"),
        ));
    }
    if tau > curve.last_t() {
        return Err(Error::domain(
            "expected_downtime",
            format!("tau = {tau} exceeds the curve horizon {}", curve.last_t()),
        ));
    }
    let mut ts = Vec::with_capacity(curve.points.len() + 1);
    let mut down = Vec::with_capacity(curve.points.len() + 1);
    if curve.first_t() > R::zero() {
        ts.push(R::zero());
        down.push(R::one() - curve.points[0].reliability);
    }
    for p in &curve.points {
        ts.push(p.t);
        down.push(R::one() - p.reliability);
    }
    let cum = cumulative_trapezoid(&ts, &down);
    Ok(integral_to(&ts, &down, &cum, tau).max(R::zero()))
}

/// Long-run expected cost per unit time of inspecting every `tau` units.
pub fn cost_rate<R: Real>(
    tau: R,
    reliability_at_tau: R,
    expected_downtime: R,
    costs: &CostModel<R>,
) -> Result<R> {
    if !(tau > R::zero()) || !tau.is_finite() {
        return Err(Error::domain(
            "cost_rate",
            format!("tau must be positive and finite (got {tau})"),
        ));
    }
    let failure_mass = (R::one() - reliability_at_tau).max(R::zero());
    Ok((costs.inspection
        + costs.replacement * failure_mass
        + costs.downtime_rate * expected_downtime)
        / tau)
}

/// One evaluated inspection-interval candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InspectionRecord<R> {
    pub tau: R,
    /// R̂(τ).
    pub reliability: R,
    /// E[ρ](τ).
    pub expected_downtime: R,
    /// CR(τ).
    pub cost_rate: R,
}

/// Outcome of an inspection-interval optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct MaintenanceResult<R> {
    /// Initial degradation levels the policy was evaluated for.
    pub ages: Vec<R>,
    pub mode: ShockMode,
    /// Every evaluated candidate (coarse and refined), sorted by τ.
    pub records: Vec<InspectionRecord<R>>,
    pub tau_star: R,
    pub cost_rate_star: R,
    pub reliability_at_star: R,
    pub expected_downtime_at_star: R,
    /// The system is already failed at time zero (some component starts at
    /// or beyond its degradation threshold); the optimum then degenerates
    /// to the largest allowed interval.
    pub failed_at_inspection: bool,
    pub seed: u64,
    pub replications: usize,
    /// Worst weight-row residuals over every curve estimated for this
    /// optimization (coarse grid plus refinement).
    pub audit: TruncationAudit<R>,
}

impl<R: Real> MaintenanceResult<R> {
    /// CSV rendering, one row per candidate with the scenario and optimum
    /// columns denormalized onto every row. Ages are `;`-joined so the file
    /// stays valid CSV for any component count.
    pub fn to_csv(&self) -> String {
        let ages = self
            .ages
            .iter()
            .map(|u| format!("{u}"))
            .collect::<Vec<_>>()
            .join(";");
        let mut out = String::from(
            "tau,R,E_rho,cost_rate,tau_star,cost_rate_star,R_star,E_rho_star,mode,ages,failed,seed,N,max_tail_mass,max_overshoot,renormalized\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.tau,
                r.reliability,
                r.expected_downtime,
                r.cost_rate,
                self.tau_star,
                self.cost_rate_star,
                self.reliability_at_star,
                self.expected_downtime_at_star,
                self.mode,
                ages,
                self.failed_at_inspection,
                self.seed,
                self.replications,
                self.audit.max_tail_mass,
                self.audit.max_overshoot,
                self.audit.renormalized
            ));
        }
        out
    }

    /// Parses the format written by [`Self::to_csv`]. Scenario columns are
    /// taken from the first row.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("maintenance csv", "empty input"))?;
        let expected =
            "tau,R,E_rho,cost_rate,tau_star,cost_rate_star,R_star,E_rho_star,mode,ages,failed,seed,N,max_tail_mass,max_overshoot,renormalized";
        if header.trim() != expected {
            return Err(Error::parse(
                "maintenance csv",
                format!("unexpected header '{header}'"),
            ));
        }
        let num = |field: &str, what: &str| -> Result<R> {
            R::parse_decimal(field)
                .ok_or_else(|| Error::parse("maintenance csv", format!("bad {what} '{field}'")))
        };
        let flag = |field: &str, what: &str| -> Result<bool> {
            match field {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(Error::parse(
                    "maintenance csv",
                    format!("bad {what} flag '{other}'"),
                )),
            }
        };
        // tau*, cost rate*, R*, E_rho*, mode, ages, failed, seed, N.
        type Scenario<R> = (R, R, R, R, ShockMode, Vec<R>, bool, u64, usize);
        let mut records = Vec::new();
        let mut scenario: Option<Scenario<R>> = None;
        let mut audit: Option<TruncationAudit<R>> = None;
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 16 {
                return Err(Error::parse(
                    "maintenance csv",
                    format!(
                        "row {} has {} fields, expected 16",
                        lineno + 2,
                        fields.len()
                    ),
                ));
            }
            records.push(InspectionRecord {
                tau: num(fields[0], "tau")?,
                reliability: num(fields[1], "R")?,
                expected_downtime: num(fields[2], "E_rho")?,
                cost_rate: num(fields[3], "cost_rate")?,
            });
            if scenario.is_none() {
                let ages = if fields[9].is_empty() {
                    Vec::new()
                } else {
                    fields[9]
                        .split(';')
                        .map(|f| num(f, "age"))
                        .collect::<Result<Vec<R>>>()?
                };
                scenario = Some((
                    num(fields[4], "tau_star")?,
                    num(fields[5], "cost_rate_star")?,
                    num(fields[6], "R_star")?,
                    num(fields[7], "E_rho_star")?,
                    ShockMode::from_str(fields[8])?,
                    ages,
                    flag(fields[10], "failed")?,
                    fields[11].parse().map_err(|_| {
                        Error::parse("maintenance csv", format!("bad seed '{}'", fields[11]))
                    })?,
                    fields[12].parse().map_err(|_| {
                        Error::parse("maintenance csv", format!("bad N '{}'", fields[12]))
                    })?,
                ));
                audit = Some(TruncationAudit {
                    max_tail_mass: num(fields[13], "max_tail_mass")?,
                    max_overshoot: num(fields[14], "max_overshoot")?,
                    renormalized: flag(fields[15], "renormalized")?,
                });
            }
        }
        let (
            tau_star,
            cost_rate_star,
            reliability_at_star,
            expected_downtime_at_star,
            mode,
            ages,
            failed,
            seed,
            replications,
        ) = scenario.ok_or_else(|| Error::parse("maintenance csv", "no data rows"))?;
        Ok(Self {
            ages,
            mode,
            records,
            tau_star,
            cost_rate_star,
            reliability_at_star,
            expected_downtime_at_star,
            failed_at_inspection: failed,
            seed,
            replications,
            audit: audit.expect("set alongside scenario"),
        })
    }
}

/// Evaluates every candidate τ of one estimated curve. Also returns the
/// curve's weight-row audit so callers can surface residuals.
fn evaluate_grid<R: Real>(
    system: &SystemSpec<R>,
    ages: &InitialAges<R>,
    costs: &CostModel<R>,
    taus: &[R],
    config: &SimConfig<R>,
) -> Result<(Vec<InspectionRecord<R>>, TruncationAudit<R>)> {
    let mut cfg = config.clone();
    cfg.t_grid = taus.to_vec();
    let curve = estimate_reliability_curve(system, ages, &cfg)?;
    let records = taus
        .iter()
        .map(|&tau| {
            let reliability = curve.reliability_at(tau);
            let downtime = expected_downtime(&curve, tau)?;
            Ok(InspectionRecord {
                tau,
                reliability,
                expected_downtime: downtime,
                cost_rate: cost_rate(tau, reliability, downtime, costs)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((records, curve.audit))
}

/// Index of the cheapest record; ties resolve to the smaller τ. Errors if
/// any cost rate is non-finite or the set is empty.
fn best_index<R: Real>(records: &[InspectionRecord<R>]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for (k, r) in records.iter().enumerate() {
        if !r.cost_rate.is_finite() {
            return Err(Error::NoOptimum(format!(
                "cost rate at tau = {} is not finite",
                r.tau.as_f64()
            )));
        }
        if best.is_none_or(|b| r.cost_rate < records[b].cost_rate) {
            best = Some(k);
        }
    }
    best.ok_or_else(|| Error::NoOptimum("no candidates evaluated".into()))
}

/// Minimizes the inspection cost rate CR(τ) over `grid`, with optional
/// refinement passes that re-grid between the incumbent's neighbors.
///
/// `config.t_grid` is ignored; the evaluation grid is the τ grid. All passes
/// reuse `config.seed`, so results for different scenarios compared under
/// the same configuration share their random numbers.
pub fn optimize_inspection<R: Real>(
    system: &SystemSpec<R>,
    ages: &InitialAges<R>,
    costs: &CostModel<R>,
    grid: &TauGrid<R>,
    config: &SimConfig<R>,
) -> Result<MaintenanceResult<R>> {
    let mut violations = Vec::new();
    costs.validate("costs", &mut violations);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let (mut records, mut audit) = evaluate_grid(system, ages, costs, &grid.points(), config)?;
    records.sort_by(|a, b| a.tau.partial_cmp(&b.tau).expect("finite taus"));
    let mut best = best_index(&records)?;

    if grid.refine {
        // Halve the (logarithmic) step around the coarse minimizer: insert
        // the geometric midpoints of the cells adjacent to it.
        let mut sub = Vec::with_capacity(2);
        if best > 0 {
            sub.push((records[best - 1].tau * records[best].tau).sqrt());
        }
        if best + 1 < records.len() {
            sub.push((records[best].tau * records[best + 1].tau).sqrt());
        }
        sub.retain(|&m| records.iter().all(|r| r.tau != m));
        if !sub.is_empty() {
            let (extra, sub_audit) = evaluate_grid(system, ages, costs, &sub, config)?;
            records.extend(extra);
            audit = audit.merge(sub_audit);
            records.sort_by(|a, b| a.tau.partial_cmp(&b.tau).expect("finite taus"));
            records.dedup_by(|a, b| a.tau == b.tau);
            best = best_index(&records)?;
        }
    }

    let star = records[best];
    let failed = ages
        .0
        .iter()
        .zip(&system.components)
        .any(|(&u, c)| u >= c.soft_threshold);
    Ok(MaintenanceResult {
        ages: ages.0.clone(),
        mode: system.mode,
        records,
        tau_star: star.tau,
        cost_rate_star: star.cost_rate,
        reliability_at_star: star.reliability,
        expected_downtime_at_star: star.expected_downtime,
        failed_at_inspection: failed,
        seed: config.seed,
        replications: config.replications,
        audit,
    })
}

/// One initial-age scenario of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<R> {
    /// Row label; keep it comma-free so sweep CSVs stay well-formed.
    pub label: String,
    pub ages: Vec<R>,
}

/// One (scenario, mode) optimization of a sweep. Failures are isolated per
/// entry so one bad scenario cannot void the rest of the sweep.
#[derive(Debug)]
pub struct SweepEntry<R> {
    pub scenario: Scenario<R>,
    pub mode: ShockMode,
    pub outcome: Result<MaintenanceResult<R>>,
}

/// Optimizes every scenario under both shock modes (Poisson first), all on
/// the same master seed so the resulting optima are directly comparable.
pub fn scenario_sweep<R: Real>(
    system: &SystemSpec<R>,
    scenarios: &[Scenario<R>],
    costs: &CostModel<R>,
    grid: &TauGrid<R>,
    config: &SimConfig<R>,
) -> Vec<SweepEntry<R>> {
    let mut out = Vec::with_capacity(scenarios.len() * 2);
    for scenario in scenarios {
        for mode in [ShockMode::Poisson, ShockMode::Facilitation] {
            let sys = system.with_mode(mode);
            let ages = InitialAges(scenario.ages.clone());
            let outcome = optimize_inspection(&sys, &ages, costs, grid, config);
            out.push(SweepEntry {
                scenario: scenario.clone(),
                mode,
                outcome,
            });
        }
    }
    out
}

/// Renders the successful sweep entries as CSV with header
/// `scenario,u_1,...,u_n,model,tau_star,cr_star,R_at_tau,E_rho`; the model
/// column is the mode's table index (1 = poisson, 2 = facilitation).
/// Failed entries are skipped; report them separately.
pub fn sweep_to_csv<R: Real>(entries: &[SweepEntry<R>]) -> String {
    let n_ages = entries
        .iter()
        .map(|e| e.scenario.ages.len())
        .max()
        .unwrap_or(0);
    let mut out = String::from("scenario");
    for k in 1..=n_ages {
        out.push_str(&format!(",u_{k}"));
    }
    out.push_str(",model,tau_star,cr_star,R_at_tau,E_rho\n");
    for e in entries {
        let Ok(res) = &e.outcome else { continue };
        out.push_str(&e.scenario.label);
        for k in 0..n_ages {
            match e.scenario.ages.get(k) {
                Some(u) => out.push_str(&format!(",{u}")),
                None => out.push(','),
            }
        }
        out.push_str(&format!(
            ",{},{},{},{},{}\n",
            e.mode.table_index(),
            res.tau_star,
            res.cost_rate_star,
            res.reliability_at_star,
            res.expected_downtime_at_star
        ));
    }
    out
}
