//! System description: components, thresholds, shock model, initial ages,
//! and maintenance costs, plus whole-bundle validation.
//!
//! A component fails *softly* when its cumulative degradation (gamma process
//! plus shock damages plus initial age offset) reaches the soft threshold H,
//! and *hard* when any single shock magnitude W exceeds the hard threshold
//! D. The series system fails when any component does.

use crate::error::{Error, Result, Violation};
use crate::numerics::clamp_probability;
use crate::real::Real;
use crate::special::std_normal_cdf;
use crate::stochastic::{FacilitationParams, GammaProcessParams, NormalParams};

/// One degrading component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSpec<R> {
    pub name: String,
    /// Soft-failure threshold on cumulative degradation (H > 0).
    pub soft_threshold: R,
    /// Hard-failure threshold on single-shock magnitude (D > 0).
    pub hard_threshold: R,
    /// Continuous degradation law.
    pub degradation: GammaProcessParams<R>,
    /// Shock magnitude law W (σ_W > 0).
    pub magnitude: NormalParams<R>,
    /// Per-shock damage law Y; σ_Y = 0 models shocks that do not damage.
    pub damage: NormalParams<R>,
}

impl<R: Real> ComponentSpec<R> {
    pub(crate) fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if !(self.soft_threshold > R::zero()) || !self.soft_threshold.is_finite() {
            out.push(Violation::new(
                format!("{path}.soft_threshold"),
                format!("must be positive and finite (got {})", self.soft_threshold),
            ));
        }
        if !(self.hard_threshold > R::zero()) || !self.hard_threshold.is_finite() {
            out.push(Violation::new(
                format!("{path}.hard_threshold"),
                format!("must be positive and finite (got {})", self.hard_threshold),
            ));
        }
        self.degradation
            .validate(&format!("{path}.degradation"), out);
        self.magnitude
            .validate_strict(&format!("{path}.magnitude"), out);
        self.damage
            .validate_allow_degenerate(&format!("{path}.damage"), out);
    }
}

/// Which count law drives shock arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockMode {
    /// Homogeneous Poisson arrivals: facilitation and degradation feedback
    /// are ignored even if configured.
    Poisson,
    /// Facilitated arrivals with degradation feedback.
    Facilitation,
}

impl ShockMode {
    /// 1-based index used in report tables (1 = poisson, 2 = facilitation).
    pub fn table_index(&self) -> u8 {
        match self {
            ShockMode::Poisson => 1,
            ShockMode::Facilitation => 2,
        }
    }
}

impl std::fmt::Display for ShockMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShockMode::Poisson => write!(f, "poisson"),
            ShockMode::Facilitation => write!(f, "facilitation"),
        }
    }
}

impl std::str::FromStr for ShockMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poisson" | "1" => Ok(ShockMode::Poisson),
            "facilitation" | "2" => Ok(ShockMode::Facilitation),
            other => Err(Error::parse(
                "shock mode",
                format!("expected 'poisson'/'1' or 'facilitation'/'2', got '{other}'"),
            )),
        }
    }
}

/// A series system of degrading components under one shared shock process.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec<R> {
    pub components: Vec<ComponentSpec<R>>,
    pub shock_model: FacilitationParams<R>,
    pub mode: ShockMode,
}

impl<R: Real> SystemSpec<R> {
    /// Shock parameters with the mode applied: Poisson mode forces η and γ
    /// to zero regardless of the stored values.
    pub fn effective_shock_params(&self) -> FacilitationParams<R> {
        match self.mode {
            ShockMode::Poisson => FacilitationParams {
                lambda0: self.shock_model.lambda0,
                eta: R::zero(),
                gamma: R::zero(),
            },
            ShockMode::Facilitation => self.shock_model,
        }
    }

    /// The same system under a different shock mode.
    pub fn with_mode(&self, mode: ShockMode) -> Self {
        let mut out = self.clone();
        out.mode = mode;
        out
    }
}

/// Initial degradation offsets u_i >= 0, one per component, interpreted as
/// degradation levels already accumulated at time zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialAges<R>(pub Vec<R>);

impl<R: Real> InitialAges<R> {
    pub fn fresh(n: usize) -> Self {
        Self(vec![R::zero(); n])
    }

    /// Converts elapsed operating times into expected degradation offsets
    /// u_i = α_i·a_i/β_i (a mean-path approximation).
    pub fn from_elapsed_times(system: &SystemSpec<R>, elapsed: &[R]) -> Result<Self> {
        if elapsed.len() != system.components.len() {
            return Err(Error::domain(
                "from_elapsed_times",
                format!(
                    "expected {} elapsed times, got {}",
                    system.components.len(),
                    elapsed.len()
                ),
            ));
        }
        Ok(Self(
            system
                .components
                .iter()
                .zip(elapsed)
                .map(|(c, &a)| c.degradation.mean_at(a))
                .collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Cost inputs for the inspection-interval optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel<R> {
    /// Cost of one inspection.
    pub inspection: R,
    /// Cost of a replacement performed at inspection when the system has
    /// failed.
    pub replacement: R,
    /// Downtime cost per unit time spent in the failed state.
    pub downtime_rate: R,
}

impl<R: Real> CostModel<R> {
    pub(crate) fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        for (field, v) in [
            ("inspection", self.inspection),
            ("replacement", self.replacement),
            ("downtime_rate", self.downtime_rate),
        ] {
            if v < R::zero() || !v.is_finite() {
                out.push(Violation::new(
                    format!("{path}.{field}"),
                    format!("must be nonnegative and finite (got {v})"),
                ));
            }
        }
        if self.inspection <= R::zero()
            && self.replacement <= R::zero()
            && self.downtime_rate <= R::zero()
        {
            out.push(Violation::new(
                path.to_string(),
                "at least one cost must be positive".to_string(),
            ));
        }
    }
}

/// Probability that a single shock does *not* hard-fail the component:
/// Φ((D − μ_W)/σ_W), clamped into [0, 1].
pub fn no_hard_failure_prob<R: Real>(component: &ComponentSpec<R>) -> Result<R> {
    let w = &component.magnitude;
    if !(w.std > R::zero()) || !w.std.is_finite() {
        return Err(Error::domain(
            "no_hard_failure_prob",
            format!("magnitude std must be positive (got {})", w.std),
        ));
    }
    if !w.mean.is_finite() || !component.hard_threshold.is_finite() {
        return Err(Error::domain(
            "no_hard_failure_prob",
            "magnitude mean and hard threshold must be finite",
        ));
    }
    Ok(clamp_probability(std_normal_cdf(
        (component.hard_threshold - w.mean) / w.std,
    )))
}

/// A system/ages/costs bundle that passed [`validate_system`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScenario<R> {
    pub system: SystemSpec<R>,
    pub ages: InitialAges<R>,
    pub costs: CostModel<R>,
}

/// Accumulates violations for the system and ages parts of a scenario.
pub(crate) fn collect_spec_violations<R: Real>(
    system: &SystemSpec<R>,
    ages: &InitialAges<R>,
    out: &mut Vec<Violation>,
) {
    if system.components.is_empty() {
        out.push(Violation::new(
            "components",
            "a system needs at least one component",
        ));
    }
    for (i, c) in system.components.iter().enumerate() {
        c.validate(&format!("components[{i}]"), out);
    }
    system.shock_model.validate("shock_model", out);
    if ages.len() != system.components.len() {
        out.push(Violation::new(
            "ages",
            format!(
                "expected {} initial ages, got {}",
                system.components.len(),
                ages.len()
            ),
        ));
    }
    for (i, &u) in ages.0.iter().enumerate() {
        if u < R::zero() || !u.is_finite() {
            out.push(Violation::new(
                format!("ages[{i}]"),
                format!("must be nonnegative and finite (got {u})"),
            ));
        }
    }
}

/// Validates a full scenario, reporting *every* violation with a dotted
/// path to the offending field.
pub fn validate_system<R: Real>(
    system: &SystemSpec<R>,
    ages: &InitialAges<R>,
    costs: &CostModel<R>,
) -> std::result::Result<ValidatedScenario<R>, Vec<Violation>> {
    let mut out = Vec::new();
    collect_spec_violations(system, ages, &mut out);
    costs.validate("costs", &mut out);
    if out.is_empty() {
        Ok(ValidatedScenario {
            system: system.clone(),
            ages: ages.clone(),
            costs: *costs,
        })
    } else {
        Err(out)
    }
}
