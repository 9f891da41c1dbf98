//! Score types.
use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Anything the compositional scorer can compute with: `f32`, `f64`, or an
/// exact rational such as `Ratio<i64>`.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync
{
    /// Lossy conversion used when loading decimal values from text files.
    fn from_decimal(value: f64) -> Option<Self> {
        if value.is_finite() {
            Self::from_f64(value)
        } else {
            None
        }
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num
        + Signed
        + Copy
        + PartialOrd
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
{
}

/// The heuristic baseline normalizes with a square root, so it needs a float.
pub trait HeuristicScalar: Scalar + Float {}

impl<T> HeuristicScalar for T where T: Scalar + Float {}
