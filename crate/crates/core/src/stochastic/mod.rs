//! Stochastic primitives: gamma-process degradation, normal shock-damage
//! laws, and the facilitated (self-exciting) shock counting process.

pub mod counting;
pub mod gamma;
pub mod shocks;

pub use counting::{
    count_pmf, count_tail_mass, poisson_pmf, simulate_count_process, FacilitationParams,
};
pub use gamma::{
    fit_gamma_process, gamma_cdf, parse_increments_csv, sample_gamma_path, GammaFit, GammaPath,
    GammaProcessParams, IncrementObservation,
};
pub use shocks::{damage_sum, damage_sum_density, DamageSum, DamageSumDensity, NormalParams};
