//! Scalar traits the library is generic over.
//!
//! [`Field`] is the minimal algebra needed by jets, polynomials and the
//! path-geometry dictionary; it is implemented for `f32`, `f64` and
//! [`Rational64`] so that those parts can run in exact arithmetic.
//! [`Real`] adds the transcendental operations needed by everything that
//! samples points, takes square roots or compares against tolerances.

use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_rational::Rational64;
use num_traits::{Float, FloatConst, Num, ToPrimitive};

pub trait Field:
    Copy
    + Debug
    + PartialEq
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Nearest `f64`, for reporting.
    fn approx(&self) -> f64;

    /// Absolute value as `f64`, used for pivoting and tolerance checks.
    fn magnitude(&self) -> f64 {
        self.approx().abs()
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

pub trait Real: Field + Float + FloatConst {
    fn from_f64(v: f64) -> Self;
    fn as_f64(self) -> f64;
}

macro_rules! impl_float_field {
    ($t:ty) => {
        impl Field for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn approx(&self) -> f64 {
                *self as f64
            }
        }

        impl Real for $t {
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_float_field!(f32);
impl_float_field!(f64);

impl Field for Rational64 {
    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

/// Largest `magnitude` in a sequence (0 for an empty one).
pub fn max_magnitude<T: Field>(values: impl IntoIterator<Item = T>) -> f64 {
    values.into_iter().map(|v| v.magnitude()).fold(0.0, f64::max)
}
