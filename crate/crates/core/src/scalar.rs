use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar carried by step functions, weights and operator outputs.
///
/// Everything in the crate is written against this trait; `f64` is the
/// reference instantiation and `f32` is supported for cheap sweeps.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64` literals and parameters.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Scalar")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to every Scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `2^e` for an integer exponent, exact while in range.
    #[inline]
    fn exp2i(e: i32) -> Self {
        Self::of(2f64.powi(e))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
