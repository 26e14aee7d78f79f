//! Scalar abstraction for the numerics layer.

use std::fmt::Debug;

use complex_bessel::BesselFloat;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar used by the generic numerics (quadrature, root
/// finding, cylinder-function sequences, Bloch steady state).
pub trait Real:
    Float + FloatConst + FromPrimitive + BesselFloat + Debug + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
