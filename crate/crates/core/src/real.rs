//! Floating-point scalar abstraction for the numerical engines.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Binary floating point usable by the Hermite and transform engines: f32 or f64.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts a literal, panicking only if the value is not representable at all.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in target float")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}
