//! Scalar abstractions.
//!
//! The dense linear algebra in [`crate::cq_lab`] is written against [`Real`]
//! (implemented for `f32` and `f64`). Classical probability code is written
//! against [`Scalar`], which additionally admits the exact rational type
//! [`Exact`] so the same formulas can be evaluated with zero rounding.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Exact rational numbers.
pub type Exact = BigRational;

/// Floating point scalar used by the matrix code.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static
{
    /// Lossy conversion from `f64`, used for tolerances and constants.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field scalar: floats or exact rationals.
pub trait Scalar: Clone + PartialOrd + Num + Signed + ToPrimitive + Debug {
    fn from_ratio(num: u64, den: u64) -> Self;
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// `num / den` as an exact rational.
pub fn ratio(num: u128, den: u128) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(x: &Exact) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `num/den` formatting used by every report.
pub fn exact_string(x: &Exact) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
