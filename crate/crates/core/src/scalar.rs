//! Scalar abstraction shared by all numeric modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the channel numerics are written against.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal or parameter into `Self`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `10·lg(x)`.
#[inline]
pub fn to_db<T: Scalar>(linear: T) -> T {
    T::lit(10.0) * linear.log10()
}

/// `10^(db/10)`.
#[inline]
pub fn from_db<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// Maps any angle in degrees into `[0, 360)`.
#[inline]
pub fn normalize_deg<T: Scalar>(deg: T) -> T {
    let full = T::lit(360.0);
    let r = deg % full;
    let r = if r < T::zero() { r + full } else { r };
    // a tiny negative remainder rounds up to exactly 360
    if r >= full {
        T::zero()
    } else {
        r
    }
}

/// Maps any angle in degrees into `(-180, 180]`.
#[inline]
pub fn wrap_deg<T: Scalar>(deg: T) -> T {
    // in-range offsets pass through untouched so that wrapping keeps x and -x symmetric
    if deg > T::lit(-180.0) && deg <= T::lit(180.0) {
        return deg;
    }
    let w = normalize_deg(deg);
    if w > T::lit(180.0) {
        w - T::lit(360.0)
    } else {
        w
    }
}
