//! Directional derivative of the dimension along parameter rays: the
//! motion-derivative series phi-dot, the derivative formula
//! d'_v = -d * (Int Re(v phi-dot / z) dmu) / (Int log|2z| dmu),
//! a finite-difference cross-check, and the key-integral comparison.

use rayon::prelude::*;

use crate::asymptotics::{self, KeyIntegralKind};
use crate::dynamics::RayParameter;
use crate::error::{Error, Result};
use crate::measures;
use crate::pressure;
use crate::scalar::{Cplx, Real};
use crate::sum;

/// Safety budget for sup|phi-dot| in the tail bound of the series.
pub const PHI_DOT_BUDGET: f64 = 100.0;

/// Tail-bound target for automatic extension of the series.
const PHI_DOT_TAIL_TOL: f64 = 1e-8;

/// Hard cap on series length; hitting it is reported via the remainder
/// bound, not silenced.
const PHI_DOT_CAP: usize = 200;

/// Truncated phi-dot value with its reported tail bound.
#[derive(Clone, Copy, Debug)]
pub struct PhiDot<T> {
    pub value: Cplx<T>,
    pub remainder_bound: T,
    pub terms: usize,
}

/// phi-dot at a Julia-set point: -sum_{k=1}^m 1/(f^k)'(z), extended past
/// the requested `m` until the tail bound B/|(f^m)'(z)| drops below 1e-8
/// (or the cap). Errors when the forward orbit passes within 1e-9 of the
/// critical point, reporting the hitting time.
pub fn phi_dot<T: Real>(delta: Cplx<T>, z: Cplx<T>, m: usize) -> Result<PhiDot<T>> {
    if m == 0 {
        return Err(Error::Domain("phi_dot needs m >= 1".into()));
    }
    let c = delta - T::lit(2.0);
    let one = Cplx::<T>::new(T::one(), T::zero());
    let mut zk = z;
    let mut deriv = one;
    let mut s = Cplx::<T>::new(T::zero(), T::zero());
    let budget = T::lit(PHI_DOT_BUDGET);
    let tol = T::lit(PHI_DOT_TAIL_TOL);
    let mut k = 0;
    loop {
        k += 1;
        if zk.norm() < T::lit(1e-9) {
            return Err(Error::Domain(format!(
                "orbit passes within 1e-9 of the critical point at step {k}"
            )));
        }
        deriv *= zk + zk;
        s += one / deriv;
        let bound = budget / deriv.norm();
        if (k >= m && bound < tol) || k >= PHI_DOT_CAP {
            return Ok(PhiDot {
                value: -s,
                remainder_bound: bound,
                terms: k,
            });
        }
        zk = zk * zk + c;
    }
}

/// The integrand Re(v phi-dot / z) of the derivative formula, v = e^{i alpha}.
pub fn integrand_f1<T: Real>(delta: Cplx<T>, z: Cplx<T>, phi_dot_value: Cplx<T>) -> Result<T> {
    let t = delta.norm();
    if t.is_zero() {
        return Err(Error::Domain("integrand_f1 needs delta != 0".into()));
    }
    if z.norm() < T::lit(1e-12) {
        return Err(Error::Domain(format!(
            "integrand_f1 evaluated too close to 0: |z| = {}",
            z.norm()
        )));
    }
    let v = delta / t;
    Ok((v * phi_dot_value / z).re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivMethod {
    Formula,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug)]
pub struct DerivDiagnostics<T> {
    pub depth: usize,
    pub density_iterations: usize,
    pub excluded_mass: T,
    pub num: T,
    pub den: T,
    pub dimension: T,
    pub dimension_error: T,
    /// Finite differences only: set when the dimension difference is
    /// dominated by extrapolation error.
    pub noise_dominated: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct DerivativeEstimate<T> {
    pub ray: RayParameter<T>,
    pub method: DerivMethod,
    /// d'_v.
    pub value: T,
    /// sqrt(t) * d'_v, the quantity with a finite limit.
    pub scaled: T,
    /// Empirical error bar (depth comparison for the formula, step-halving
    /// for finite differences).
    pub error_bar: T,
    pub diagnostics: DerivDiagnostics<T>,
}

struct FormulaParts<T> {
    num: T,
    den: T,
    excluded_mass: T,
    density_iterations: usize,
}

fn formula_parts<T: Real>(
    delta: Cplx<T>,
    d: T,
    depth: usize,
    max_m: usize,
) -> Result<FormulaParts<T>> {
    let conformal = measures::conformal_atoms(delta, d, depth)?;
    let (mu, info) = measures::invariant_density(delta, d, &conformal, max_m)?;
    let phi: Vec<Option<Cplx<T>>> = mu
        .z
        .par_iter()
        .map(|&z| phi_dot(delta, z, 4).ok().map(|pd| pd.value))
        .collect();
    let idx: Vec<usize> = (0..mu.len()).collect();
    let excluded_mass = sum::sum_map(&idx, |&i| {
        if phi[i].is_none() {
            mu.weight[i]
        } else {
            T::zero()
        }
    });
    if excluded_mass > T::lit(0.001 * measures::TOTAL_MASS) {
        return Err(Error::NonConvergence(format!(
            "phi_dot failed on atoms carrying mass {excluded_mass} (> 0.1% of total)"
        )));
    }
    let v = delta / delta.norm();
    let num = sum::sum_map(&idx, |&i| match phi[i] {
        Some(pd) => mu.weight[i] * (v * pd / mu.z[i]).re,
        None => T::zero(),
    });
    let den = sum::sum_map(&idx, |&i| match phi[i] {
        Some(_) => mu.weight[i] * (mu.z[i] + mu.z[i]).norm().ln(),
        None => T::zero(),
    });
    Ok(FormulaParts {
        num,
        den,
        excluded_mass,
        density_iterations: info.iterations,
    })
}

/// Maximum density iterations used by the derivative pipelines.
const DENSITY_MAX_M: usize = 12;

/// d'_v by the derivative formula at the given atom depth. The error bar
/// is the change of the estimate when the atom depth is reduced by 2.
pub fn derivative_formula<T: Real>(
    ray: RayParameter<T>,
    depth: usize,
    tol: T,
) -> Result<DerivativeEstimate<T>> {
    if ray.t() <= T::zero() {
        return Err(Error::Domain("derivative needs t > 0".into()));
    }
    if depth < 6 {
        return Err(Error::Domain("derivative atom depth must be >= 6".into()));
    }
    let delta = ray.delta();
    let dim = pressure::dimension(delta, tol.max(T::lit(1e-5)))?;
    let d = dim.d_value;
    let parts = formula_parts(delta, d, depth, DENSITY_MAX_M)?;
    let value = -d * parts.num / parts.den;
    let coarse = formula_parts(delta, d, depth - 2, DENSITY_MAX_M)?;
    let coarse_value = -d * coarse.num / coarse.den;
    let scale = ray.t().sqrt();
    Ok(DerivativeEstimate {
        ray,
        method: DerivMethod::Formula,
        value,
        scaled: scale * value,
        error_bar: (value - coarse_value).abs(),
        diagnostics: DerivDiagnostics {
            depth,
            density_iterations: parts.density_iterations,
            excluded_mass: parts.excluded_mass,
            num: parts.num,
            den: parts.den,
            dimension: d,
            dimension_error: dim.extrapolation_error,
            noise_dominated: false,
        },
    })
}

/// d'_v by central differences of the dimension along the ray. The
/// reported error bar combines step-halving with the dimension
/// extrapolation error; the noise flag trips when the latter dominates.
pub fn derivative_fd<T: Real>(
    ray: RayParameter<T>,
    h: T,
    tol: T,
) -> Result<DerivativeEstimate<T>> {
    if !(h > T::zero() && ray.t() - h > T::zero()) {
        return Err(Error::Domain(format!(
            "finite-difference step h = {h} must satisfy 0 < h < t = {}",
            ray.t()
        )));
    }
    let dim_tol = (tol / T::lit(10.0)).max(T::lit(1e-5));
    let v = ray.direction();
    let dim_at = |t: T| pressure::dimension(v * t, dim_tol);
    let hi = dim_at(ray.t() + h)?;
    let lo = dim_at(ray.t() - h)?;
    let half = h * T::lit(0.5);
    let hi2 = dim_at(ray.t() + half)?;
    let lo2 = dim_at(ray.t() - half)?;
    let value = (hi.d_value - lo.d_value) / (h + h);
    let value_half = (hi2.d_value - lo2.d_value) / h;
    let extrapolation = hi.extrapolation_error + lo.extrapolation_error;
    let error_bar =
        T::lit(4.0 / 3.0) * (value - value_half).abs() + extrapolation / (h + h);
    let noise_dominated = (hi.d_value - lo.d_value).abs() < T::lit(20.0) * extrapolation;
    let scale = ray.t().sqrt();
    Ok(DerivativeEstimate {
        ray,
        method: DerivMethod::FiniteDifference,
        value,
        scaled: scale * value,
        error_bar,
        diagnostics: DerivDiagnostics {
            depth: hi.depth_used.max(lo.depth_used),
            density_iterations: 0,
            excluded_mass: T::zero(),
            num: T::zero(),
            den: T::zero(),
            dimension: (hi.d_value + lo.d_value) * T::lit(0.5),
            dimension_error: extrapolation,
            noise_dominated,
        },
    })
}

/// Comparison of the window-restricted measure integral with the closed
/// form (2/pi) I_{alpha,R}, in both scalings, plus the phi-dot variant.
#[derive(Clone, Copy, Debug)]
pub struct KeyIntegralReport<T> {
    pub ray: RayParameter<T>,
    pub r: T,
    /// |delta|^{1 - d/2} Int_{window} Re(-v/z^2) dmu.
    pub lhs: T,
    /// Same integral under the naive |delta|^{1/2} scaling, for reference.
    pub lhs_half_scaling: T,
    /// (2/pi) I_{alpha,R}.
    pub rhs: T,
    pub rel_gap: T,
    /// |delta|^{1 - d/2} Int_{window} Re(v phi-dot / z) dmu.
    pub lhs_phi_dot: T,
    /// (1/3)(2/pi) I_{alpha,R}.
    pub rhs_phi_dot: T,
    pub phi_dot_gap: T,
    pub window_atoms: usize,
    pub sparse: bool,
}

pub fn key_integral_check<T: Real>(
    ray: RayParameter<T>,
    r: T,
    depth: usize,
) -> Result<KeyIntegralReport<T>> {
    let t = ray.t();
    if t <= T::zero() {
        return Err(Error::Domain("key integral check needs t > 0".into()));
    }
    let delta = ray.delta();
    let dim = pressure::dimension(delta, T::lit(1e-4))?;
    let d = dim.d_value;
    let conformal = measures::conformal_atoms(delta, d, depth)?;
    let (mu, _) = measures::invariant_density(delta, d, &conformal, DENSITY_MAX_M)?;
    let cut = r * t.sqrt();
    let v = delta / t;
    let in_window = |z: Cplx<T>| z.re.abs() <= cut;
    let window_atoms = mu.z.iter().filter(|z| in_window(**z)).count();
    let idx: Vec<usize> = (0..mu.len()).collect();
    let raw = sum::sum_map(&idx, |&i| {
        let z = mu.z[i];
        if in_window(z) {
            mu.weight[i] * (-v / (z * z)).re
        } else {
            T::zero()
        }
    });
    let raw_phi = sum::sum_map(&idx, |&i| {
        let z = mu.z[i];
        if in_window(z) {
            match phi_dot(delta, z, 4) {
                Ok(pd) => mu.weight[i] * (v * pd.value / z).re,
                Err(_) => T::zero(),
            }
        } else {
            T::zero()
        }
    });
    let exponent = T::one() - d * T::lit(0.5);
    let lhs = t.powf(exponent) * raw;
    let lhs_half_scaling = t.sqrt() * raw;
    // The closed form lives on (0, pi]; the profile is mirror-symmetric.
    let alpha = if ray.alpha() > T::PI() {
        T::PI() + T::PI() - ray.alpha()
    } else {
        ray.alpha()
    };
    let key = asymptotics::key_integral(alpha, r, KeyIntegralKind::FiniteR)?;
    let two_over_pi = T::lit(2.0) / T::PI();
    let rhs = two_over_pi * key.value;
    let rhs_phi_dot = rhs / T::lit(3.0);
    let lhs_phi_dot = t.powf(exponent) * raw_phi;
    Ok(KeyIntegralReport {
        ray,
        r,
        lhs,
        lhs_half_scaling,
        rhs,
        rel_gap: ((lhs - rhs) / rhs).abs(),
        lhs_phi_dot,
        rhs_phi_dot,
        phi_dot_gap: ((lhs_phi_dot - rhs_phi_dot) / rhs_phi_dot).abs(),
        window_atoms,
        sparse: window_atoms < 50,
    })
}
