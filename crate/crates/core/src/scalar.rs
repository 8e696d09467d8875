//! Scalar abstraction shared by the numeric modules.
//!
//! Network weights, z-scores, modularity and the cost model are written
//! against [`Scalar`] so they run on `f32` or `f64`. Partition comparison
//! only needs field arithmetic and is generic over [`Fraction`], which
//! additionally admits exact rationals such as `num_rational::Ratio<i64>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating-point scalar used for weights, scores and quality values.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or intermediate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable in every float scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

/// Ordered field element: enough structure for ratios of counts and
/// harmonic means.
pub trait Fraction: Num + Copy + PartialOrd + FromPrimitive + Debug {
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }
}

impl<T> Fraction for T where T: Num + Copy + PartialOrd + FromPrimitive + Debug {}

/// Harmonic mean of two non-negative values, zero when either is zero.
pub fn harmonic_mean<T: Fraction>(a: T, b: T) -> T {
    let zero = T::zero();
    if a <= zero || b <= zero {
        return zero;
    }
    let two = T::one() + T::one();
    two * a * b / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_mean_zero_rule() {
        assert_eq!(harmonic_mean(0.0, 0.7), 0.0);
        assert_eq!(harmonic_mean(0.5, 0.0), 0.0);
        assert!((harmonic_mean(1.0_f64 / 3.0, 2.0 / 9.0) - 4.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn lit_round_trips_through_f32() {
        let x: f32 = Scalar::lit(0.25);
        assert_eq!(x, 0.25_f32);
        assert_eq!(x.as_f64(), 0.25);
    }
}
