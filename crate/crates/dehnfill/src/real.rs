//! Scalar abstraction: all core math is generic over a floating scalar.

use core::fmt::{Debug, Display};
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type the toolkit computes with. Implemented for `f32` and `f64`.
///
/// The stated tolerances of the bound reproductions assume `f64`; `f32`
/// works for exploratory use but will not meet the 1e-12-class identities.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable in the scalar type")
}

#[inline]
pub(crate) fn two<T: Real>() -> T {
    T::one() + T::one()
}
