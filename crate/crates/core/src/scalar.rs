use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar used throughout the crate: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance for set membership and geometric identities.
    fn tolerance() -> Self;

    /// Smallest coordinate kept inside the entropic prox-domain.
    fn entropic_floor() -> Self;

    /// Converts an `f64` literal. Values outside the range of `Self`
    /// saturate the way `as` casts do.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }

    fn entropic_floor() -> Self {
        1e-300
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }

    fn entropic_floor() -> Self {
        f32::MIN_POSITIVE
    }
}
