//! Scalar abstraction so the whole stack runs in either `f32` or `f64`.
//!
//! Everything numeric in this crate is generic over [`Scalar`]. The stated
//! tolerances throughout the docs are `f64`-scale; `f32` works but the
//! certification harness is only meaningful in double precision.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar usable for samples, coefficients and norms.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Sum + Display + LowerExp + Debug
{
    /// Lossy conversion from an `f64` literal (tolerances, grid constants).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    /// Lossy conversion from a machine integer (wavenumbers, counts).
    fn of_i64(x: i64) -> Self {
        Self::from_i64(x).expect("i64 fits in scalar")
    }

    /// Lossy round-trip to `f64` (reporting, CSV output).
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
