//! Scalar abstraction: all numerics are generic over a floating-point type.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar usable throughout the crate (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Shorthand for injecting an `f64` literal into the working scalar type.
#[inline]
pub fn lit<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("literal does not fit in scalar type")
}

/// Lossy view of a scalar as `f64`, for reports and serialization.
#[inline]
pub fn as_f64<R: Real>(x: R) -> f64 {
    x.to_f64().expect("scalar not representable as f64")
}

#[inline]
pub fn half<R: Real>() -> R {
    lit(0.5)
}

#[inline]
pub fn two<R: Real>() -> R {
    lit(2.0)
}

/// ⟨v⟩ = (1 + |v|²)^{1/2} applied to a squared norm.
#[inline]
pub fn japanese_bracket_sq<R: Real>(norm_sq: R) -> R {
    (R::one() + norm_sq).sqrt()
}
