use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the planar math is generic over: `f32` or `f64`.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + 'static {}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Lossy conversion from an `f64` constant into the working scalar.
#[inline]
pub fn cast<S: Scalar>(v: f64) -> S {
    S::from_f64(v).expect("constant representable in scalar type")
}
