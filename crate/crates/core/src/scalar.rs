use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the whole library is generic over: f32 or f64.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for converting an f64 literal into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in this scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a generic scalar.
pub type Cplx<T> = num_complex::Complex<T>;
