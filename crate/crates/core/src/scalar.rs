//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All state vectors, operators and distributions are generic over a real
//! floating-point type `T: Real`. `f64` is the primary instantiation; `f32`
//! is supported with looser tolerances.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Floating-point scalar: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + NumAssign
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Branch probabilities at or below this value are treated as impossible.
    fn zero_tolerance() -> Self;
    /// Allowed deviation of a state's norm from one.
    fn norm_tolerance() -> Self;
    /// Fidelity slack used when deciding two states are the same ray.
    fn aggregation_tolerance() -> Self;
    /// One draw from the standard normal distribution.
    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// One draw from the uniform distribution on `[0, 1)`.
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Converts an `f64` literal.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable")
    }

    /// Converts a count.
    fn from_count(value: u64) -> Self {
        Self::from_u64(value).expect("count representable")
    }
}

impl Real for f64 {
    fn zero_tolerance() -> Self {
        1e-12
    }
    fn norm_tolerance() -> Self {
        1e-10
    }
    fn aggregation_tolerance() -> Self {
        1e-9
    }
    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}

impl Real for f32 {
    fn zero_tolerance() -> Self {
        1e-6
    }
    fn norm_tolerance() -> Self {
        1e-5
    }
    fn aggregation_tolerance() -> Self {
        1e-5
    }
    fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
    fn sample_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}
