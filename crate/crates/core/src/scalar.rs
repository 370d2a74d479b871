use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the numerical core is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Rescales a tolerance written for `f64` to this type's precision.
    ///
    /// `f64` gets `x` back unchanged; a narrower type gets `x * sqrt(eps / f64::EPSILON)`.
    fn tol(x: f64) -> Self {
        let ratio = Self::epsilon().as_f64() / f64::EPSILON;
        Self::of(x * ratio.sqrt())
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_scaling() {
        assert_eq!(<f64 as Scalar>::tol(1e-10), 1e-10);
        let t = <f32 as Scalar>::tol(1e-10);
        assert!(t > 1e-7 && t < 1e-5, "{t}");
    }

    #[test]
    fn conversions() {
        assert_eq!(f32::of(0.5), 0.5f32);
        assert_eq!(f64::of_usize(17), 17.0);
        assert_eq!(2.5f32.as_f64(), 2.5);
    }
}
