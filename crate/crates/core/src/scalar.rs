//! Scalar abstractions.
//!
//! The metric-free part of the exterior algebra (wedge and interior
//! products, matrix algebra, Euclidean Hodge table) only needs ring
//! operations and therefore also runs on exact types such as
//! `num_rational::Rational64`. Everything that takes square roots, solves
//! or transforms needs [`Real`], which is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};
use rustfft::FftNum;

/// Commutative ring with division where defined (integers, rationals, floats).
pub trait Ring: Copy + Num + Neg<Output = Self> + Debug + PartialEq {}

impl<T> Ring for T where T: Copy + Num + Neg<Output = T> + Debug + PartialEq {}

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Ring
    + Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + FftNum
    + Send
    + Sync
    + Display
    + LowerExp
    + Default
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts to `f64` for reporting and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
