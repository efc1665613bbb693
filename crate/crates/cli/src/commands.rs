//! Subcommand implementations. Each one computes its outputs fully before
//! anything touches disk, so a failed run leaves no partial files.

use crate::config::{parse_scenarios, Experiment};
use failsim_core::maintenance::{optimize_inspection, scenario_sweep, sweep_to_csv};
use failsim_core::model::ShockMode;
use failsim_core::numerics::CompensatedSum;
use failsim_core::reliability::curve::TruncationAudit;
use failsim_core::reliability::{estimate_reliability_curve, system_reliability_closed};
use failsim_core::stochastic::{count_pmf, fit_gamma_process, parse_increments_csv};
use failsim_core::{Ages, Curve, Error, Normal, Result, ShockModel, System};

/// A rendered output file: name within the output directory, contents.
pub type OutputFile = (String, String);

/// Which shock models a command covers: 1 = memoryless arrivals, 2 = the
/// facilitated/feedback model, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelChoice {
    #[value(name = "1")]
    Poisson,
    #[value(name = "2")]
    Facilitation,
    Both,
}

impl ModelChoice {
    pub fn modes(self) -> Vec<ShockMode> {
        match self {
            ModelChoice::Poisson => vec![ShockMode::Poisson],
            ModelChoice::Facilitation => vec![ShockMode::Facilitation],
            ModelChoice::Both => vec![ShockMode::Poisson, ShockMode::Facilitation],
        }
    }
}

/// Parameter axis for the sensitivity sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    Gamma,
    Eta,
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::Gamma => "gamma",
            SweepParam::Eta => "eta",
        }
    }
}

fn audit_line(label: &str, audit: &TruncationAudit<f64>) -> String {
    format!(
        "{label}: weight-row residuals — max deficit {:.3e}, max overshoot {:.3e} \
         (renormalized: {})",
        audit.max_tail_mass, audit.max_overshoot, audit.renormalized
    )
}

fn estimate(exp: &Experiment, system: &System, renormalize: bool) -> Result<Curve> {
    let mut sim = exp.sim.clone();
    sim.renormalize_pmf = renormalize;
    estimate_reliability_curve(system, &exp.ages, &sim)
}

/// Reliability curves for the requested models on the configured time grid.
pub fn run_reliability(
    exp: &Experiment,
    choice: ModelChoice,
    renormalize: bool,
) -> Result<Vec<OutputFile>> {
    let mut files = Vec::new();
    for mode in choice.modes() {
        let system = exp.system.with_mode(mode);
        let curve = estimate(exp, &system, renormalize)?;
        println!(
            "{}",
            audit_line(&format!("model {}", mode.table_index()), &curve.audit)
        );
        files.push((
            format!("reliability_model_{}.csv", mode.table_index()),
            curve.to_csv(),
        ));
    }
    Ok(files)
}

/// Reliability curves under the facilitated model with one shock parameter
/// swept across the given values, sharing random numbers via the seed.
pub fn run_sensitivity(
    exp: &Experiment,
    param: SweepParam,
    values: &[f64],
    renormalize: bool,
) -> Result<Vec<OutputFile>> {
    if values.is_empty() {
        return Err(Error::domain("sensitivity", "need at least one value"));
    }
    let mut seen: Vec<f64> = Vec::new();
    let mut files = Vec::new();
    for &v in values {
        if seen.contains(&v) {
            return Err(Error::domain(
                "sensitivity",
                format!("duplicate value {v} would overwrite its own output"),
            ));
        }
        seen.push(v);
        let base = exp.system.shock_model;
        let shock = match param {
            SweepParam::Gamma => ShockModel::new(base.lambda0, base.eta, v)?,
            SweepParam::Eta => ShockModel::new(base.lambda0, v, base.gamma)?,
        };
        let mut system = exp.system.with_mode(ShockMode::Facilitation);
        system.shock_model = shock;
        let curve = estimate(exp, &system, renormalize)?;
        let label = format!("{} = {v}", param.name());
        println!("{}", audit_line(&label, &curve.audit));
        files.push((
            format!("sensitivity_{}_{v}.csv", param.name()),
            curve.to_csv(),
        ));
    }
    Ok(files)
}

fn without_damage(system: &System) -> System {
    let mut out = system.clone();
    for c in &mut out.components {
        c.damage = Normal {
            mean: 0.0,
            std: 0.0,
        };
    }
    out
}

/// The four dependence cases built from one configured system: (1) neither
/// direction of dependence (no damage, no facilitation, no feedback),
/// (2) shocks damage the degradation path only, (3) degradation feeds the
/// shock rate only, (4) the full mutually dependent model.
pub fn case_systems(exp: &Experiment) -> Result<[(u8, System); 4]> {
    let base = exp.system.with_mode(ShockMode::Facilitation);
    let s = base.shock_model;
    let independent = ShockModel::new(s.lambda0, 0.0, 0.0)?;
    let feedback_only = ShockModel::new(s.lambda0, 0.0, s.gamma)?;

    let mut case1 = without_damage(&base);
    case1.shock_model = independent;
    let mut case2 = base.clone();
    case2.shock_model = independent;
    let mut case3 = without_damage(&base);
    case3.shock_model = feedback_only;
    let case4 = base;
    Ok([(1, case1), (2, case2), (3, case3), (4, case4)])
}

/// Reliability curves for the four dependence cases under shared random
/// numbers.
pub fn run_cases(exp: &Experiment, renormalize: bool) -> Result<Vec<OutputFile>> {
    let mut files = Vec::new();
    for (k, system) in case_systems(exp)? {
        let curve = estimate(exp, &system, renormalize)?;
        println!("{}", audit_line(&format!("case {k}"), &curve.audit));
        files.push((format!("case_{k}.csv"), curve.to_csv()));
    }
    Ok(files)
}

/// Inspection-interval optimization for the requested models.
pub fn run_optimize(
    exp: &Experiment,
    choice: ModelChoice,
    renormalize: bool,
) -> Result<Vec<OutputFile>> {
    let mut sim = exp.sim.clone();
    sim.renormalize_pmf = renormalize;
    let mut files = Vec::new();
    for mode in choice.modes() {
        let system = exp.system.with_mode(mode);
        let plan = optimize_inspection(&system, &exp.ages, &exp.costs, &exp.taus, &sim)?;
        println!(
            "model {}: tau* = {:.6}, cost rate {:.6}, R(tau*) = {:.6}",
            mode.table_index(),
            plan.tau_star,
            plan.cost_rate_star,
            plan.reliability_at_star
        );
        println!(
            "{}",
            audit_line(&format!("model {}", mode.table_index()), &plan.audit)
        );
        files.push((
            format!("inspection_model_{}.csv", mode.table_index()),
            plan.to_csv(),
        ));
    }
    Ok(files)
}

/// Initial-age scenario sweep over both models; per-scenario failures are
/// reported but do not void the rest of the sweep.
pub fn run_sweep(
    exp: &Experiment,
    scenarios_text: &str,
    renormalize: bool,
) -> Result<Vec<OutputFile>> {
    let scenarios = parse_scenarios(scenarios_text, exp.system.components.len())?;
    let mut sim = exp.sim.clone();
    sim.renormalize_pmf = renormalize;
    let entries = scenario_sweep(&exp.system, &scenarios, &exp.costs, &exp.taus, &sim);
    let mut failures = 0;
    let mut audits = [TruncationAudit::default(); 2];
    for e in &entries {
        match &e.outcome {
            Ok(plan) => {
                let k = usize::from(e.mode.table_index() - 1);
                audits[k] = audits[k].merge(plan.audit);
            }
            Err(err) => {
                failures += 1;
                eprintln!(
                    "warning: scenario '{}' model {} failed: {err}",
                    e.scenario.label,
                    e.mode.table_index()
                );
            }
        }
    }
    if failures == entries.len() {
        return Err(Error::NoOptimum(
            "every scenario of the sweep failed; see warnings above".into(),
        ));
    }
    for (k, audit) in audits.iter().enumerate() {
        println!(
            "{}",
            audit_line(&format!("model {} (worst over scenarios)", k + 1), audit)
        );
    }
    println!(
        "swept {} scenarios x 2 models ({} failures)",
        scenarios.len(),
        failures
    );
    Ok(vec![("sweep.csv".to_string(), sweep_to_csv(&entries))])
}

/// Degradation-increment MLE; emits a one-row CSV with the estimate and its
/// diagnostics.
pub fn run_fit(data_text: &str) -> Result<Vec<OutputFile>> {
    let data = parse_increments_csv::<f64>(data_text)?;
    let fit = fit_gamma_process(&data)?;
    println!(
        "fit: alpha = {:.6}, beta = {:.6} (n = {}, gradient norm {:.3e}, {} iterations)",
        fit.alpha,
        fit.beta,
        data.len(),
        fit.gradient_norm,
        fit.iterations
    );
    let csv = format!(
        "alpha,beta,log_likelihood,gradient_norm,iterations,n\n{},{},{},{},{},{}\n",
        fit.alpha,
        fit.beta,
        fit.log_likelihood,
        fit.gradient_norm,
        fit.iterations,
        data.len()
    );
    Ok(vec![("fit.csv".to_string(), csv)])
}

/// Built-in health checks: count-law normalization summed to numerical
/// exhaustion, and the Monte Carlo estimator against the closed form on
/// path-independent (γ = 0) variants of the configured system.
pub fn run_selftest(exp: &Experiment) -> Result<()> {
    let worst = selftest_pmf_normalization()?;
    println!("ok pmf-normalization: worst |1 - Σ pmf| = {worst:.3e} over 9 parameter points");

    for (label, eta) in [
        ("poisson", 0.0),
        ("facilitated", exp.system.shock_model.eta),
    ] {
        let worst = selftest_closed_form_oracle(exp, eta)?;
        println!(
            "ok closed-form-oracle ({label}): worst |MC - closed| relative to bound = {worst:.3}"
        );
    }
    println!("selftest passed");
    Ok(())
}

/// Sums the count pmf to numerical exhaustion for a grid of (Λ₀, η) pairs
/// and returns the worst deviation of the total from one.
fn selftest_pmf_normalization() -> Result<f64> {
    const CAP: u32 = 2_000_000;
    let mut worst = 0.0_f64;
    for &lambda in &[0.1, 1.0, 10.0] {
        for &eta in &[0.01, 0.2, 1.0] {
            let mut sum = CompensatedSum::new();
            let mut m = 0u32;
            loop {
                sum.add(count_pmf(m, lambda, eta)?);
                if 1.0 - sum.total() < 1e-10 {
                    break;
                }
                m += 1;
                if m > CAP {
                    return Err(Error::NoConvergence {
                        iterations: CAP as usize,
                        residual: 1.0 - sum.total(),
                    });
                }
            }
            let dev = (1.0 - sum.total()).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    if worst > 1e-9 {
        return Err(Error::NoConvergence {
            iterations: CAP as usize,
            residual: worst,
        });
    }
    Ok(worst)
}

/// Compares the Monte Carlo estimator against the closed form on a γ = 0
/// variant of the configured system. Returns the worst deviation as a
/// fraction of the acceptance bound max(4·SE, 2.5e-3).
fn selftest_closed_form_oracle(exp: &Experiment, eta: f64) -> Result<f64> {
    let base = exp.system.shock_model;
    let mut system = exp.system.with_mode(ShockMode::Facilitation);
    system.shock_model = ShockModel::new(base.lambda0, eta, 0.0)?;
    let ages = Ages::fresh(system.components.len());

    let mut sim = exp.sim.clone();
    sim.replications = 2_000.min(exp.sim.replications.max(1));
    let n = sim.t_grid.len();
    if n > 10 {
        let step = n / 10;
        sim.t_grid = sim.t_grid.iter().copied().step_by(step.max(1)).collect();
    }
    let curve = estimate_reliability_curve(&system, &ages, &sim)?;

    let mut worst = 0.0_f64;
    for p in curve.points.iter().skip(1) {
        let exact = system_reliability_closed(p.t, &ages, &system)?;
        let bound = (4.0 * p.std_error).max(2.5e-3);
        let ratio = (p.reliability - exact).abs() / bound;
        if ratio > worst {
            worst = ratio;
        }
    }
    if worst > 1.0 {
        return Err(Error::NoConvergence {
            iterations: sim.replications,
            residual: worst,
        });
    }
    Ok(worst)
}
