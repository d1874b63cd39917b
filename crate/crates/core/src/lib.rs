//! Hausdorff dimension of Julia sets of f_delta(z) = z^2 - 2 + delta for
//! delta near 0 outside the Mandelbrot set, the directional derivative of
//! the dimension along parameter rays, and the closed-form asymptotic
//! profile it converges to.
//!
//! Everything is generic over the scalar type ([`Real`]: f32 or f64);
//! concrete f64 aliases are exported at the crate root.

pub mod asymptotics;
pub mod cylinders;
pub mod derivative;
pub mod dynamics;
pub mod error;
pub mod linearization;
pub mod measures;
pub mod pressure;
pub mod rescaling;
pub mod scalar;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

/// Concrete f64 complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Concrete f32 complex scalar.
pub type C32 = num_complex::Complex<f32>;

/// f64 ray parameter.
pub type Ray64 = dynamics::RayParameter<f64>;
/// f64 Julia-set sample.
pub type JuliaSample64 = dynamics::JuliaSample<f64>;
/// f64 measure discretization.
pub type MeasureAtoms64 = measures::MeasureAtoms<f64>;
/// f64 dimension estimate.
pub type DimensionEstimate64 = pressure::DimensionEstimate<f64>;
/// f64 derivative estimate.
pub type DerivativeEstimate64 = derivative::DerivativeEstimate<f64>;
