//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Total for the supported scalar types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Lossless widening used for hashing, JSON and CSV output.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// Stable key for memo tables (`-0.0` and `0.0` share a key).
    #[inline]
    fn memo_key(self) -> u64 {
        let v = self.as_f64();
        if v == 0.0 {
            0
        } else {
            v.to_bits()
        }
    }

    fn erf(self) -> Self {
        crate::special::erf(self)
    }
}

impl Real for f32 {}
impl Real for f64 {}
