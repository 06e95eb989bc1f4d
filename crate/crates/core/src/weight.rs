//! Integer cost scalars.
//!
//! Every cost, gain and tour length in the solver is an exact signed
//! integer. The search is generic over the width so that small instances
//! can run on `i32` and instances with very large coordinates on `i128`.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{NumCast, PrimInt, Signed, ToPrimitive};

/// A signed integer type usable as an edge cost and gain.
pub trait Weight:
    PrimInt + Signed + NumCast + Sum + FromStr + Default + Hash + Debug + Display + Send + Sync + 'static
{
    /// Converts a rounded real distance into a cost, saturating on overflow.
    fn from_f64_saturating(value: f64) -> Self {
        <Self as NumCast>::from(value).unwrap_or_else(|| {
            if value < 0.0 {
                Self::min_value()
            } else {
                Self::max_value()
            }
        })
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Widens to `i64`, saturating if the value does not fit.
    fn to_i64_saturating(self) -> i64 {
        ToPrimitive::to_i64(&self).unwrap_or(if self < Self::zero() { i64::MIN } else { i64::MAX })
    }
}

impl<T> Weight for T where
    T: PrimInt
        + Signed
        + NumCast
        + Sum
        + FromStr
        + Default
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_conversion() {
        assert_eq!(i32::from_f64_saturating(5.0), 5);
        assert_eq!(i32::from_f64_saturating(1e20), i32::MAX);
        assert_eq!(i32::from_f64_saturating(-1e20), i32::MIN);
        assert_eq!(i128::from_f64_saturating(1e20), 100_000_000_000_000_000_000);
        assert_eq!(i128::MAX.to_i64_saturating(), i64::MAX);
    }
}
