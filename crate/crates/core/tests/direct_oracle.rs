//! Cross-validation of the analytic reliability chain against a direct
//! event-driven simulation that shares no code with it.
//!
//! The direct simulator draws shock counts from exponential waiting times
//! (rate (1 + η·n)·λ₀ between the n-th and (n+1)-th shock, exact when the
//! rate does not feed on degradation), samples one magnitude and one damage
//! per shock and component, and draws the continuous degradation from its
//! gamma marginal. Agreement within Monte Carlo error checks the count
//! pmf, the damage-mixture quadrature, the gamma CDF, and the series
//! composition all at once.

use failsim_core::model::{ComponentSpec, InitialAges, ShockMode, SystemSpec};
use failsim_core::reliability::system_reliability_closed;
use failsim_core::stochastic::{FacilitationParams, GammaProcessParams, NormalParams};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal};

fn component(
    name: &str,
    soft: f64,
    hard: f64,
    alpha: f64,
    beta: f64,
    magnitude: (f64, f64),
    damage: (f64, f64),
) -> ComponentSpec<f64> {
    ComponentSpec {
        name: name.into(),
        soft_threshold: soft,
        hard_threshold: hard,
        degradation: GammaProcessParams { alpha, beta },
        magnitude: NormalParams {
            mean: magnitude.0,
            std: magnitude.1,
        },
        damage: NormalParams {
            mean: damage.0,
            std: damage.1,
        },
    }
}

/// Two dissimilar components; the second takes a fixed damage per shock so
/// the point-mass convolution path gets exercised too.
fn system(mode: ShockMode) -> SystemSpec<f64> {
    SystemSpec {
        components: vec![
            component("fast-wear", 5.0, 9.0, 0.5, 1.2, (4.0, 2.0), (0.4, 0.15)),
            component("slow-wear", 6.0, 8.0, 0.2, 1.6, (3.0, 2.0), (0.3, 0.0)),
        ],
        shock_model: FacilitationParams::new(0.15, 0.6, 0.0).unwrap(),
        mode,
    }
}

/// One replication of the actual failure mechanism at horizon `t`.
fn survives_once<G: Rng>(sys: &SystemSpec<f64>, ages: &[f64], t: f64, rng: &mut G) -> bool {
    let shock = sys.effective_shock_params();
    let mut count = 0u32;
    let mut clock = 0.0;
    loop {
        let rate = (1.0 + shock.eta * f64::from(count)) * shock.lambda0;
        clock += Exp::new(rate).unwrap().sample(rng);
        if clock > t {
            break;
        }
        count += 1;
        assert!(count < 1_000_000, "runaway shock count");
    }
    for (comp, &u) in sys.components.iter().zip(ages) {
        let magnitude = Normal::new(comp.magnitude.mean, comp.magnitude.std).unwrap();
        let mut damage_total = 0.0;
        for _ in 0..count {
            if magnitude.sample(rng) >= comp.hard_threshold {
                return false;
            }
            damage_total += if comp.damage.std > 0.0 {
                Normal::new(comp.damage.mean, comp.damage.std)
                    .unwrap()
                    .sample(rng)
            } else {
                comp.damage.mean
            };
        }
        let shape = comp.degradation.alpha * t;
        let wear = if shape > 0.0 {
            Gamma::new(shape, 1.0 / comp.degradation.beta)
                .unwrap()
                .sample(rng)
        } else {
            0.0
        };
        if u + wear + damage_total >= comp.soft_threshold {
            return false;
        }
    }
    true
}

/// Direct estimate with its standard error.
fn direct_estimate(
    sys: &SystemSpec<f64>,
    ages: &[f64],
    t: f64,
    reps: u64,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut alive = 0u64;
    for _ in 0..reps {
        if survives_once(sys, ages, t, &mut rng) {
            alive += 1;
        }
    }
    let p = alive as f64 / reps as f64;
    (p, (p * (1.0 - p) / reps as f64).sqrt())
}

fn check_agreement(sys: &SystemSpec<f64>, ages: &InitialAges<f64>, seed: u64) {
    const REPS: u64 = 40_000;
    let mut values = Vec::new();
    for &t in &[4.0, 10.0, 20.0] {
        let analytic = system_reliability_closed(t, ages, sys).unwrap();
        let (direct, se) = direct_estimate(sys, &ages.0, t, REPS, seed ^ t.to_bits());
        let tol = (3.0 * se).max(1.5e-3);
        assert!(
            (analytic - direct).abs() <= tol,
            "mode {:?}, t = {t}: closed form {analytic:.5} vs direct {direct:.5} \
             (se {se:.1e}, tol {tol:.1e})",
            sys.mode
        );
        values.push(analytic);
    }
    // Guard against a vacuous comparison: the grid must catch the curve in
    // motion, not just its flat tails.
    assert!(values[0] > 0.3 && values[0] < 0.9995);
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn direct_simulation_matches_closed_form_under_poisson_shocks() {
    let sys = system(ShockMode::Poisson);
    check_agreement(&sys, &InitialAges::fresh(2), 0xA11CE);
}

#[test]
fn direct_simulation_matches_closed_form_under_facilitated_shocks() {
    let sys = system(ShockMode::Facilitation);
    check_agreement(&sys, &InitialAges::fresh(2), 0xB0B);
}

#[test]
fn direct_simulation_matches_closed_form_with_initial_wear() {
    let sys = system(ShockMode::Facilitation);
    check_agreement(&sys, &InitialAges(vec![1.0, 2.0]), 0xC0FFEE);
}

#[test]
fn facilitation_produces_more_shocks_and_lower_reliability_than_poisson() {
    let fac = system(ShockMode::Facilitation);
    let poi = system(ShockMode::Poisson);
    let ages = InitialAges::fresh(2);
    for &t in &[4.0, 10.0, 20.0] {
        let rf = system_reliability_closed(t, &ages, &fac).unwrap();
        let rp = system_reliability_closed(t, &ages, &poi).unwrap();
        assert!(
            rf < rp,
            "t = {t}: facilitation should cost reliability ({rf} vs {rp})"
        );
    }
}
