//! Real scalar abstraction for the matrix backend.
//!
//! Everything numeric in [`crate::fhilb`] is generic over a [`RealScalar`];
//! matrices hold `Complex<R>` entries. `f64` is the working precision used by
//! the crate-root aliases, `f32` also satisfies the bound (with tolerances to
//! match).

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalars usable as the real part of the matrix backend.
pub trait RealScalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used to thread tolerances through generic
    /// code. Falls back to zero only for values unrepresentable in `Self`,
    /// which cannot happen for the small non-negative tolerances in use.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::zero)
    }

    /// Lossy conversion to `f64`, used for reporting residuals.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl RealScalar for f32 {}
impl RealScalar for f64 {}
