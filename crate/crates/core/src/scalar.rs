use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used for charges, recurrences and fits.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {
    #[inline]
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 converts into every float scalar")
    }

    #[inline]
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize converts into every float scalar")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// `log2(x)`, clamped below at 1.
    #[inline]
    fn log2_clamped(self) -> Self {
        self.log2().max(Self::one())
    }

    /// `log2(log2(x))`, clamped below at 1.
    #[inline]
    fn loglog2_clamped(self) -> Self {
        self.log2().log2().max(Self::one())
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {}
