//! Koenigs conjugation at the repelling fixed point p_delta: the truncated
//! coordinate Phi_n(z) = lambda^n fhat^{-n}(z) for the shifted map
//! fhat(z) = f(z + p) - p, its inverse, and empirical calibration of the
//! validity radius.
//!
//! Numerical form: with p^2 = p + 2 - delta, the inverse branch of fhat
//! fixing 0 is z / (p + sqrt(p^2 + z)) (rationalized to avoid the
//! catastrophic cancellation of sqrt(p^2 + z) - p for small z), and fhat
//! itself is z (lambda + z).

use num_complex::Complex;

use crate::dynamics::{branch_sqrt, fixed_point};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Default admissibility radius in delta for chart construction.
pub const R_TRIANGLE: f64 = 0.15;

/// Truncation cap for the Koenigs iteration.
pub const MAX_TERMS: usize = 60;

/// Sup-norm tolerance for choosing the truncation depth.
const TRUNCATION_TOL: f64 = 1e-12;

/// Truncated Koenigs chart at p_delta, immutable after construction.
#[derive(Clone, Debug)]
pub struct KoenigsChart<T> {
    delta: Cplx<T>,
    p: Cplx<T>,
    lambda: Cplx<T>,
    n_terms: usize,
    r_z: T,
}

fn fhat_inv<T: Real>(p: Cplx<T>, z: Cplx<T>) -> Cplx<T> {
    z / (p + branch_sqrt(p * p + z))
}

fn fhat<T: Real>(lambda: Cplx<T>, z: Cplx<T>) -> Cplx<T> {
    z * (lambda + z)
}

fn forward_n<T: Real>(p: Cplx<T>, lambda: Cplx<T>, z: Cplx<T>, n: usize) -> Cplx<T> {
    let mut w = z;
    for _ in 0..n {
        w = fhat_inv(p, w);
    }
    w * lambda.powu(n as u32)
}

fn inverse_n<T: Real>(lambda: Cplx<T>, w: Cplx<T>, n: usize) -> Cplx<T> {
    let mut z = w / lambda.powu(n as u32);
    for _ in 0..n {
        z = fhat(lambda, z);
    }
    z
}

/// Truncation depth at which Phi_n has converged to `TRUNCATION_TOL` on a
/// circle of the given radius.
fn adaptive_terms<T: Real>(p: Cplx<T>, lambda: Cplx<T>, radius: T) -> Result<usize> {
    let samples: Vec<Cplx<T>> = (0..16)
        .map(|k| {
            let th = T::lit(2.0 * std::f64::consts::PI * k as f64 / 16.0);
            Complex::new(radius * th.cos(), radius * th.sin())
        })
        .collect();
    let mut prev: Vec<Cplx<T>> = samples
        .iter()
        .map(|&z| forward_n(p, lambda, z, 4))
        .collect();
    for n in 5..=MAX_TERMS {
        let curr: Vec<Cplx<T>> = samples
            .iter()
            .map(|&z| forward_n(p, lambda, z, n))
            .collect();
        let sup = prev
            .iter()
            .zip(&curr)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max);
        if sup < T::lit(TRUNCATION_TOL) {
            return Ok(n);
        }
        prev = curr;
    }
    Err(Error::NonConvergence(format!(
        "Koenigs truncation did not settle below {TRUNCATION_TOL} within {MAX_TERMS} terms"
    )))
}

fn near_identity_on_circle<T: Real>(p: Cplx<T>, lambda: Cplx<T>, r: T) -> Result<bool> {
    let n = adaptive_terms(p, lambda, r)?;
    let half = T::lit(0.5);
    for k in 0..64 {
        let th = T::lit(2.0 * std::f64::consts::PI * k as f64 / 64.0);
        let z = Complex::new(r * th.cos(), r * th.sin());
        if (forward_n(p, lambda, z, n) / z - T::one()).norm() >= half {
            return Ok(false);
        }
        if (inverse_n(lambda, z, n) / z - T::one()).norm() >= half {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest dyadic r <= 0.25 on which the chart stays within distance 1/2
/// of the identity on a 64-point circle (the paper's own validity
/// criterion). The calibrated value is an implementation artifact, not a
/// constant of the theory.
pub fn calibrate_radius<T: Real>(delta: Cplx<T>) -> Result<T> {
    if delta.norm() >= T::lit(R_TRIANGLE) {
        return Err(Error::Domain(format!(
            "chart calibration requires |delta| < {R_TRIANGLE}, got {}",
            delta.norm()
        )));
    }
    let fp = fixed_point(delta)?;
    let mut r = T::lit(0.25);
    while r >= T::lit(1e-3) {
        if near_identity_on_circle(fp.p, fp.lambda, r)? {
            return Ok(r);
        }
        r = r * T::lit(0.5);
    }
    Err(Error::NonConvergence(
        "no radius >= 1e-3 satisfies the near-identity bounds".into(),
    ))
}

impl<T: Real> KoenigsChart<T> {
    /// Chart with calibrated radius and adaptive truncation depth.
    pub fn new(delta: Cplx<T>) -> Result<Self> {
        let r_z = calibrate_radius(delta)?;
        Self::with_radius(delta, r_z)
    }

    /// Chart with an explicitly chosen validity radius.
    pub fn with_radius(delta: Cplx<T>, r_z: T) -> Result<Self> {
        if !(r_z > T::zero()) {
            return Err(Error::Domain(format!("chart radius must be > 0, got {r_z}")));
        }
        let fp = fixed_point(delta)?;
        if fp.lambda.norm() <= T::one() {
            return Err(Error::Domain(
                "fixed point is not repelling for this delta".into(),
            ));
        }
        let n_terms = adaptive_terms(fp.p, fp.lambda, r_z)?;
        Ok(Self {
            delta,
            p: fp.p,
            lambda: fp.lambda,
            n_terms,
            r_z,
        })
    }

    pub fn delta(&self) -> Cplx<T> {
        self.delta
    }

    pub fn p(&self) -> Cplx<T> {
        self.p
    }

    pub fn lambda(&self) -> Cplx<T> {
        self.lambda
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn r_z(&self) -> T {
        self.r_z
    }

    fn check_radius(&self, z: Cplx<T>) -> Result<()> {
        if z.norm() >= self.r_z {
            return Err(Error::Domain(format!(
                "|z| = {} outside the chart radius {}",
                z.norm(),
                self.r_z
            )));
        }
        Ok(())
    }

    /// Phi_n(z) = lambda^n fhat^{-n}(z), the truncated Koenigs coordinate.
    pub fn forward(&self, z: Cplx<T>) -> Result<Cplx<T>> {
        self.check_radius(z)?;
        Ok(forward_n(self.p, self.lambda, z, self.n_terms))
    }

    /// Phi_n^{-1}(w) = fhat^n(w / lambda^n).
    pub fn inverse(&self, w: Cplx<T>) -> Result<Cplx<T>> {
        self.check_radius(w)?;
        Ok(inverse_n(self.lambda, w, self.n_terms))
    }

    /// The shifted map fhat(z) = f(z + p) - p = z (lambda + z).
    pub fn conjugated_map(&self, z: Cplx<T>) -> Cplx<T> {
        fhat(self.lambda, z)
    }
}
