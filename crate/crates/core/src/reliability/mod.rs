//! System reliability: closed form for degradation-independent shock rates,
//! Monte Carlo for the general (degradation-fed) case.

pub mod closed;
pub mod curve;
pub mod monte_carlo;
pub mod path;

pub use closed::{component_reliability_closed, path_independent_pmf, system_reliability_closed};
pub use curve::{CurveMethod, CurvePoint, ReliabilityCurve, TruncationAudit};
pub use monte_carlo::{estimate_reliability_curve, replication_reliability, SimConfig};
pub use path::{integrate_baseline_intensity, DegradationPath, ShockJump};
