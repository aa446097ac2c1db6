//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

/// Real floating-point type the simulator is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + FftNum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an integer.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }

    /// A tolerance of `x`, widened to a few thousand ulps when the type cannot
    /// resolve `x` (f32 against 1e-10 tolerances).
    #[inline]
    fn tolerance(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(4096.0))
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Symmetric representative of `k mod n`, in `[-n/2, n/2)` (even n) or
/// `[-(n-1)/2, (n-1)/2]` (odd n).
#[inline]
pub fn symmetric_rep(k: i64, n: usize) -> i64 {
    let n = n as i64;
    let half = n / 2;
    (k + half).rem_euclid(n) - half
}
