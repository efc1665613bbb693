//! Scalar abstraction the numeric core is generic over.
//!
//! Everything downstream (special functions, quadrature, samplers, the
//! Monte Carlo engine) is written against [`Real`] so the same code runs in
//! `f32` and `f64`. The accuracy targets quoted elsewhere in this crate
//! assume `f64`; `f32` works but bottoms out near its machine epsilon.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01, StandardNormal};

/// Floating-point scalar with the conversions and random draws the engine
/// needs.
pub trait Real:
    Float
    + FloatConst
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + fmt::Display
    + fmt::Debug
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Reusable gamma sampler; constructing one amortizes per-draw setup in
    /// hot loops that repeatedly sample the same shape/rate.
    type GammaSampler: Clone + Send + Sync;

    /// Converts an `f64` constant (lossy for `f32`).
    fn of(v: f64) -> Self;

    /// Converts a count.
    fn of_usize(n: usize) -> Self;

    /// Widens to `f64`.
    fn as_f64(self) -> f64;

    /// Parses the decimal form produced by `Display`. Returns `None` on
    /// malformed input.
    fn parse_decimal(s: &str) -> Option<Self>;

    /// Builds a sampler for the gamma distribution with the given `shape`
    /// and `rate` (density `rate^shape x^{shape-1} e^{-rate x} / Γ(shape)`).
    ///
    /// Both parameters must be positive and finite.
    fn gamma_sampler(shape: Self, rate: Self) -> Self::GammaSampler;

    /// Draws from a prepared gamma sampler.
    fn sample_gamma<G: Rng + ?Sized>(sampler: &Self::GammaSampler, rng: &mut G) -> Self;

    /// One-shot gamma(shape, rate) draw.
    fn sample_gamma_once<G: Rng + ?Sized>(rng: &mut G, shape: Self, rate: Self) -> Self {
        Self::sample_gamma(&Self::gamma_sampler(shape, rate), rng)
    }

    /// Standard normal draw.
    fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Uniform draw on the open interval (0, 1).
    fn sample_open01<G: Rng + ?Sized>(rng: &mut G) -> Self;

    /// Unit-rate exponential draw.
    fn sample_exp1<G: Rng + ?Sized>(rng: &mut G) -> Self;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            type GammaSampler = Gamma<$t>;

            #[inline]
            fn of(v: f64) -> Self {
                v as $t
            }

            #[inline]
            fn of_usize(n: usize) -> Self {
                n as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }

            fn parse_decimal(s: &str) -> Option<Self> {
                s.trim().parse().ok()
            }

            fn gamma_sampler(shape: Self, rate: Self) -> Self::GammaSampler {
                Gamma::new(shape, 1.0 / rate).expect("gamma sampler parameters must be positive")
            }

            #[inline]
            fn sample_gamma<G: Rng + ?Sized>(sampler: &Self::GammaSampler, rng: &mut G) -> Self {
                sampler.sample(rng)
            }

            #[inline]
            fn sample_standard_normal<G: Rng + ?Sized>(rng: &mut G) -> Self {
                StandardNormal.sample(rng)
            }

            #[inline]
            fn sample_open01<G: Rng + ?Sized>(rng: &mut G) -> Self {
                Open01.sample(rng)
            }

            #[inline]
            fn sample_exp1<G: Rng + ?Sized>(rng: &mut G) -> Self {
                Exp1.sample(rng)
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);
