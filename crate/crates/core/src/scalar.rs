use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the numeric core is generic over: f32 or f64.
pub trait Scalar:
    Float + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from f64 for constants and RNG draws.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
