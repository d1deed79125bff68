//! Scalar abstraction for the numeric kernels.
//!
//! All dense linear algebra and lattice arithmetic in this crate is generic
//! over [`Real`], which is any IEEE float exposing the `num-traits` surface we
//! need. Concrete aliases for the common instantiations live at the crate
//! root (`Mat64`, `CMat64`, ...). Experiments and reports run on `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: f32 or f64.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Display + Debug + Send + Sync + 'static
{
    /// Lossless-enough conversion from f64 used when moving sampled entries
    /// (always drawn in f64) into a generic matrix.
    fn of_f64(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 -> Real conversion")
    }

    fn to_f64_lossy(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("Real -> f64 conversion")
    }

    fn of_usize(x: usize) -> Self {
        <Self as FromPrimitive>::from_usize(x).expect("usize -> Real conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}
