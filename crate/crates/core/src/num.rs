//! Scalar abstraction: everything numeric in this crate is generic over a
//! floating-point type so that f32 and f64 instantiations share one code path.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from usize for the small integer sizes
    /// that show up here (filter lengths, antenna counts, trial counts).
    fn from_usize_(n: usize) -> Self {
        Self::from_usize(n).expect("usize out of scalar range")
    }

    /// Conversion from f64 literals/constants.
    fn from_f64_(x: f64) -> Self {
        Self::from_f64(x).expect("f64 out of scalar range")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
