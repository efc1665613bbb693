//! Experiment configuration: a small TOML schema that parses into a fully
//! validated model bundle.
//!
//! The schema is strict — unknown keys are rejected by name — and every
//! numeric constraint is checked at load time so later stages only ever see
//! well-formed inputs. Degradation uses the rate convention: increments over
//! dt are Gamma(alpha·dt, beta) with mean alpha·dt/beta.

use failsim_core::maintenance::Scenario;
use failsim_core::model::{validate_system, InitialAges};
use failsim_core::numerics::logspace;
use failsim_core::{
    Ages, Component, Costs, Error, GammaProcess, Normal, Result, ShockModel, Sim, System, Taus,
};
use serde::Deserialize;

/// The shipped default configuration (a two-component servo valve); used
/// whenever `--config` is omitted and as schema documentation.
pub const BUILT_IN_CONFIG: &str = include_str!("../../../configs/servo_valve.cfg");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    system: SystemSection,
    components: Vec<ComponentSection>,
    costs: CostsSection,
    sim: SimSection,
    grids: GridsSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    lambda0: f64,
    eta: f64,
    gamma: f64,
    mode: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSection {
    name: String,
    #[serde(rename = "H")]
    soft_threshold: f64,
    #[serde(rename = "D")]
    hard_threshold: f64,
    alpha: f64,
    beta: f64,
    w_mean: f64,
    w_std: f64,
    y_mean: f64,
    y_std: f64,
    u: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostsSection {
    c_i: f64,
    c_r: f64,
    c_rho: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimSection {
    replications: usize,
    max_shocks: u32,
    path_steps: usize,
    seed: u64,
    truncation_tol: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridsSection {
    t_min: f64,
    t_max: f64,
    t_points: usize,
    tau_min: f64,
    tau_max: f64,
    tau_points: usize,
}

/// A validated experiment: the model bundle plus simulation and grid
/// settings, ready to hand to the estimators.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub system: System,
    pub ages: Ages,
    pub costs: Costs,
    /// Simulation settings with `t_grid` set to the reliability grid.
    pub sim: Sim,
    pub taus: Taus,
    /// The exact text this experiment was parsed from (content-hashed into
    /// run manifests).
    pub source_text: String,
}

impl Experiment {
    /// Parses and validates TOML config text.
    pub fn from_text(text: &str) -> Result<Self> {
        let file: FileConfig = toml::from_str(text)
            .map_err(|e| Error::parse("config", e.to_string().trim().to_string()))?;
        let mode = file.system.mode.parse()?;
        let shock_model = ShockModel::new(file.system.lambda0, file.system.eta, file.system.gamma)?;
        let components: Vec<Component> = file
            .components
            .iter()
            .map(|c| Component {
                name: c.name.clone(),
                soft_threshold: c.soft_threshold,
                hard_threshold: c.hard_threshold,
                degradation: GammaProcess {
                    alpha: c.alpha,
                    beta: c.beta,
                },
                magnitude: Normal {
                    mean: c.w_mean,
                    std: c.w_std,
                },
                damage: Normal {
                    mean: c.y_mean,
                    std: c.y_std,
                },
            })
            .collect();
        let system = System {
            components,
            shock_model,
            mode,
        };
        let ages: Ages = InitialAges(file.components.iter().map(|c| c.u).collect());
        let costs = Costs {
            inspection: file.costs.c_i,
            replacement: file.costs.c_r,
            downtime_rate: file.costs.c_rho,
        };
        validate_system(&system, &ages, &costs).map_err(Error::Validation)?;
        let g = &file.grids;
        if !(g.t_min > 0.0) || !(g.t_max > g.t_min) || g.t_points < 2 {
            return Err(Error::domain(
                "config grids",
                format!(
                    "need 0 < t_min < t_max and t_points >= 2 \
                     (got t_min={}, t_max={}, t_points={})",
                    g.t_min, g.t_max, g.t_points
                ),
            ));
        }
        let taus = Taus::new(g.tau_min, g.tau_max, g.tau_points, false)?;
        let sim = Sim {
            replications: file.sim.replications,
            max_shocks: file.sim.max_shocks,
            path_steps: file.sim.path_steps,
            t_grid: logspace(g.t_min, g.t_max, g.t_points),
            seed: file.sim.seed,
            truncation_tolerance: file.sim.truncation_tol,
            renormalize_pmf: false,
        };
        sim.validate(&system)?;
        Ok(Self {
            system,
            ages,
            costs,
            sim,
            taus,
            source_text: text.to_string(),
        })
    }

    /// Loads a config file from disk.
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    /// The built-in servo-valve experiment.
    pub fn built_in() -> Self {
        Self::from_text(BUILT_IN_CONFIG).expect("the built-in config is valid")
    }
}

/// Parses an initial-age scenarios file with header `label,u_1,...,u_n`,
/// where n must match the configured component count.
pub fn parse_scenarios(text: &str, n_components: usize) -> Result<Vec<Scenario<f64>>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse("scenarios CSV", "empty input"))?;
    let expected: Vec<String> = std::iter::once("label".to_string())
        .chain((1..=n_components).map(|k| format!("u_{k}")))
        .collect();
    let got: Vec<&str> = header.split(',').map(str::trim).collect();
    if got != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(Error::parse(
            "scenarios CSV",
            format!(
                "expected header '{}', got '{}'",
                expected.join(","),
                header.trim()
            ),
        ));
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != n_components + 1 {
            return Err(Error::parse(
                "scenarios CSV",
                format!(
                    "line {}: expected {} fields, got {}",
                    idx + 1,
                    n_components + 1,
                    fields.len()
                ),
            ));
        }
        let mut ages = Vec::with_capacity(n_components);
        for f in &fields[1..] {
            let v: f64 = f.parse().map_err(|_| {
                Error::parse(
                    "scenarios CSV",
                    format!("line {}: bad age value '{f}'", idx + 1),
                )
            })?;
            ages.push(v);
        }
        out.push(Scenario {
            label: fields[0].to_string(),
            ages,
        });
    }
    if out.is_empty() {
        return Err(Error::parse("scenarios CSV", "no scenario rows"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn built_in_config_parses_and_validates() {
        let exp = Experiment::built_in();
        assert_eq!(exp.system.components.len(), 2);
        assert_eq!(exp.system.components[0].name, "spool");
        assert_eq!(exp.system.components[0].soft_threshold, 5.0);
        assert_eq!(exp.system.components[1].hard_threshold, 45.0);
        assert_eq!(exp.system.shock_model.lambda0, 2.5e-5);
        assert_eq!(exp.ages.0, vec![0.0, 0.0]);
        assert_eq!(exp.costs.downtime_rate, 100.0);
        assert_eq!(exp.sim.t_grid.len(), 100);
        assert_eq!(exp.sim.seed, 42);
        assert!(!exp.sim.renormalize_pmf);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let text = BUILT_IN_CONFIG.replace("lambda0", "lamda0");
        let err = Experiment::from_text(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lamda0"), "error should name the key: {msg}");
    }

    #[test]
    fn empty_config_is_a_parse_error() {
        let err = Experiment::from_text("").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn value_violations_are_reported_with_field_paths() {
        let text = BUILT_IN_CONFIG.replace("beta = 1.2", "beta = -1.2");
        let err = Experiment::from_text(&text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Validation(_)), "{msg}");
        assert!(msg.contains("beta"), "{msg}");
    }

    #[test]
    fn scenarios_round_trip_and_error_cases() {
        let text = "label,u_1,u_2\na,0,0\nb,1.5,2.5\n";
        let scen = parse_scenarios(text, 2).unwrap();
        assert_eq!(scen.len(), 2);
        assert_eq!(scen[1].label, "b");
        assert_eq!(scen[1].ages, vec![1.5, 2.5]);

        assert!(parse_scenarios("", 2).is_err());
        assert!(parse_scenarios("label,u_1\na,0\n", 2).is_err());
        assert!(parse_scenarios("label,u_1,u_2\na,0\n", 2).is_err());
        assert!(parse_scenarios("label,u_1,u_2\na,zero,0\n", 2).is_err());
        assert!(parse_scenarios("label,u_1,u_2\n", 2).is_err());
    }

    #[test]
    fn shipped_scenarios_file_matches_the_built_in_system() {
        let text = include_str!("../../../configs/scenarios.csv");
        let scen = parse_scenarios(text, 2).unwrap();
        assert_eq!(scen.len(), 10);
        assert_eq!(scen[0].ages, vec![0.0, 0.0]);
        assert_eq!(scen[9].ages, vec![4.8, 5.5]);
    }
}
