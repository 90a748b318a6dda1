//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point field the gate algebra is written over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Max-norm bound on `U†U - I` accepted when constructing a unitary.
    fn unitarity_tolerance() -> Self;

    /// Converts an `f64` literal; every value used by this crate is representable.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f64 {
    fn unitarity_tolerance() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn unitarity_tolerance() -> Self {
        2e-5
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi<T: Real>(angle: T) -> T {
    let two_pi = T::TAU();
    let mut a = angle % two_pi;
    if a > T::PI() {
        a = a - two_pi;
    } else if a <= -T::PI() {
        a = a + two_pi;
    }
    // Drop a negative zero so serialized phases read `0.0`.
    a + T::zero()
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_two_pi<T: Real>(angle: T) -> T {
    let two_pi = T::TAU();
    let a = angle % two_pi;
    let a = if a < T::zero() { a + two_pi } else { a };
    // `a + 2π` can round up to exactly 2π for tiny negative inputs.
    if a >= two_pi {
        T::zero()
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrapping() {
        assert!((wrap_pi(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_pi(-PI) - PI).abs() < 1e-12);
        assert!((wrap_pi(0.25) - 0.25).abs() < 1e-15);
        assert!((wrap_two_pi(-0.5) - (2.0 * PI - 0.5)).abs() < 1e-12);
        assert_eq!(wrap_two_pi(-1e-300), 0.0);
        assert_eq!(wrap_two_pi(2.0 * PI), 0.0);
    }
}
