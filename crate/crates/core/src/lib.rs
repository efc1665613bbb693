//! Reliability modeling and inspection planning for multi-component systems
//! whose components degrade continuously and are damaged by random shocks,
//! with the shock arrival rate itself fed by the accumulated degradation.
//!
//! The crate provides:
//!
//! - gamma-process degradation paths, their marginal distribution, and
//!   maximum-likelihood fitting from increment data ([`stochastic`]);
//! - a facilitated (self-exciting) shock counting process together with its
//!   closed-form count distribution ([`stochastic::counting`]);
//! - closed-form and Monte Carlo system reliability ([`reliability`]);
//! - inspection-interval optimization against a long-run cost rate
//!   ([`maintenance`]).
//!
//! The numeric core is generic over the scalar type through [`Real`];
//! `f64` aliases for the common concrete types are exported at the root.

// Validation deliberately writes `!(x > 0.0)` instead of `x <= 0.0`: the
// negated form also rejects NaN, which must never pass a bound check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod maintenance;
pub mod model;
pub mod numerics;
pub mod real;
pub mod reliability;
pub mod rng;
pub mod special;
pub mod stochastic;

pub use error::{Error, Result, Violation};
pub use real::Real;

/// Double-precision aliases for the component/system description types.
pub type Component = model::ComponentSpec<f64>;
pub type System = model::SystemSpec<f64>;
pub type Ages = model::InitialAges<f64>;
pub type Costs = model::CostModel<f64>;
pub type GammaProcess = stochastic::GammaProcessParams<f64>;
pub type Normal = stochastic::NormalParams<f64>;
pub type ShockModel = stochastic::FacilitationParams<f64>;

/// Double-precision aliases for the simulation and planning types.
pub type Sim = reliability::SimConfig<f64>;
pub type Curve = reliability::ReliabilityCurve<f64>;
pub type Taus = maintenance::TauGrid<f64>;
pub type Plan = maintenance::MaintenanceResult<f64>;
