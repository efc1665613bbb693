//! Normal laws for shock magnitudes and shock damages, and the distribution
//! of the total damage after m shocks.
//!
//! Each shock carries a magnitude W (compared against a hard-failure
//! threshold) and adds a damage Y to the component's degradation level.
//! Damages are independent normals, so the m-fold total is
//! N(m·μ_Y, m·σ_Y²); the m = 0 total is a point mass at zero. A degenerate
//! damage law (σ_Y = 0) models shocks that leave degradation untouched.

use crate::error::{Error, Result, Violation};
use crate::real::Real;
use crate::special::{std_normal_cdf, std_normal_pdf};

/// Mean and standard deviation of a normal law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalParams<R> {
    pub mean: R,
    pub std: R,
}

impl<R: Real> NormalParams<R> {
    /// A proper normal law; requires `std > 0` and finite parameters.
    pub fn new(mean: R, std: R) -> Result<Self> {
        let p = Self { mean, std };
        let mut violations = Vec::new();
        p.validate_strict("normal", &mut violations);
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(Error::Validation(violations))
        }
    }

    /// Point mass at `mean` (σ = 0); used for shocks with deterministic or
    /// absent damage.
    pub fn degenerate(mean: R) -> Self {
        Self {
            mean,
            std: R::zero(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.std == R::zero()
    }

    /// CDF; the degenerate case is a unit step at the mean.
    pub fn cdf(&self, x: R) -> R {
        if self.is_degenerate() {
            return if x >= self.mean { R::one() } else { R::zero() };
        }
        std_normal_cdf((x - self.mean) / self.std)
    }

    /// Requires σ > 0.
    pub(crate) fn validate_strict(&self, path: &str, out: &mut Vec<Violation>) {
        if !self.mean.is_finite() {
            out.push(Violation::new(
                format!("{path}.mean"),
                format!("mean must be finite (got {})", self.mean),
            ));
        }
        if !(self.std > R::zero()) || !self.std.is_finite() {
            out.push(Violation::new(
                format!("{path}.std"),
                format!(
                    "standard deviation must be positive and finite (got {})",
                    self.std
                ),
            ));
        }
    }

    /// Allows σ = 0 (degenerate law).
    pub(crate) fn validate_allow_degenerate(&self, path: &str, out: &mut Vec<Violation>) {
        if !self.mean.is_finite() {
            out.push(Violation::new(
                format!("{path}.mean"),
                format!("mean must be finite (got {})", self.mean),
            ));
        }
        if self.std < R::zero() || !self.std.is_finite() {
            out.push(Violation::new(
                format!("{path}.std"),
                format!(
                    "standard deviation must be nonnegative and finite (got {})",
                    self.std
                ),
            ));
        }
    }
}

/// Distribution of the total damage accumulated over `m` shocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DamageSum<R> {
    /// All mass at one point (m = 0, or degenerate per-shock damage).
    PointMass(R),
    /// N(m·μ_Y, m·σ_Y²).
    Gaussian { mean: R, std: R },
}

impl<R: Real> DamageSum<R> {
    /// P(total <= x).
    pub fn cdf(&self, x: R) -> R {
        match *self {
            DamageSum::PointMass(at) => {
                if x >= at {
                    R::one()
                } else {
                    R::zero()
                }
            }
            DamageSum::Gaussian { mean, std } => std_normal_cdf((x - mean) / std),
        }
    }
}

/// Law of the m-fold damage total for per-shock damage `damage`.
pub fn damage_sum<R: Real>(m: u32, damage: &NormalParams<R>) -> DamageSum<R> {
    if m == 0 {
        return DamageSum::PointMass(R::zero());
    }
    let mf = R::of(m as f64);
    if damage.is_degenerate() {
        return DamageSum::PointMass(mf * damage.mean);
    }
    DamageSum::Gaussian {
        mean: mf * damage.mean,
        std: mf.sqrt() * damage.std,
    }
}

/// Density (or point-mass location) of the m-fold damage total at `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DamageSumDensity<R> {
    /// The total is deterministic; carries the atom's location.
    PointMass { at: R },
    /// Absolutely continuous part: the density value at the query point.
    Density(R),
}

/// Evaluates the density of the total damage after `m` shocks at `y`.
///
/// `m = 0` (or a degenerate per-shock law) has no density; the returned
/// variant flags the point mass instead.
pub fn damage_sum_density<R: Real>(m: u32, damage: &NormalParams<R>, y: R) -> DamageSumDensity<R> {
    match damage_sum(m, damage) {
        DamageSum::PointMass(at) => DamageSumDensity::PointMass { at },
        DamageSum::Gaussian { mean, std } => {
            DamageSumDensity::Density(std_normal_pdf((y - mean) / std) / std)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::adaptive_simpson;

    fn abs_eq(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol,
            "expected {a} ≈ {b} (tol {tol:.1e}, diff {:.3e})",
            (a - b).abs()
        );
    }

    #[test]
    fn validation_rules() {
        assert!(NormalParams::new(10.0, 5.0).is_ok());
        assert!(NormalParams::new(10.0, 0.0).is_err());
        assert!(NormalParams::new(10.0, -1.0).is_err());
        assert!(NormalParams::new(f64::NAN, 1.0).is_err());
        let d = NormalParams::degenerate(0.5);
        assert!(d.is_degenerate());
        assert_eq!(d.cdf(0.49), 0.0);
        assert_eq!(d.cdf(0.5), 1.0);
    }

    #[test]
    fn single_shock_density_peak() {
        // m = 1, Y ~ N(0.5, 0.1²): density at the mean is 1/(0.1·√(2π)).
        let y = NormalParams::new(0.5, 0.1).unwrap();
        match damage_sum_density(1, &y, 0.5) {
            DamageSumDensity::Density(d) => abs_eq(d, 3.989_422_804_014_327, 1e-12),
            other => panic!("expected a density, got {other:?}"),
        }
    }

    #[test]
    fn four_shock_density_value() {
        // m = 4 doubles the std: N(2.0, 0.2²); at y = 2 the density is
        // 1/(0.2·√(2π)).
        let y = NormalParams::new(0.5, 0.1).unwrap();
        match damage_sum_density(4, &y, 2.0) {
            DamageSumDensity::Density(d) => abs_eq(d, 1.994_711_402_007_163_5, 1e-12),
            other => panic!("expected a density, got {other:?}"),
        }
    }

    #[test]
    fn zero_shocks_is_point_mass_at_zero() {
        let y = NormalParams::new(0.5, 0.1).unwrap();
        assert_eq!(
            damage_sum_density(0, &y, 0.3),
            DamageSumDensity::PointMass { at: 0.0 }
        );
        assert_eq!(damage_sum(0, &y), DamageSum::PointMass(0.0));
    }

    #[test]
    fn degenerate_damage_concentrates_at_m_times_mean() {
        let y = NormalParams::degenerate(0.5);
        assert_eq!(damage_sum(3, &y), DamageSum::PointMass(1.5));
        assert_eq!(
            damage_sum_density(3, &y, 1.5),
            DamageSumDensity::PointMass { at: 1.5 }
        );
    }

    #[test]
    fn density_integrates_to_one() {
        let y = NormalParams::new(0.5, 0.1).unwrap();
        for m in [1u32, 3, 10] {
            let f = |x: f64| match damage_sum_density(m, &y, x) {
                DamageSumDensity::Density(d) => d,
                _ => unreachable!(),
            };
            let mean = 0.5 * m as f64;
            let spread = 0.1 * (m as f64).sqrt() * 10.0;
            let total = adaptive_simpson(&f, mean - spread, mean + spread, 1e-11);
            abs_eq(total, 1.0, 1e-9);
        }
    }

    #[test]
    fn damage_sum_cdf_matches_normal() {
        let y = NormalParams::new(0.5, 0.1).unwrap();
        let law = damage_sum(4, &y);
        abs_eq(law.cdf(2.0), 0.5, 1e-14);
        abs_eq(law.cdf(2.2), crate::special::std_normal_cdf(1.0), 1e-13);
    }
}
