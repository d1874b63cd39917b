//! Closed-form asymptotic objects: the profile Omega_{-2}(alpha), its root
//! alpha_0, the key integrals I_{alpha,R} and their R -> infinity limits,
//! the K constants, and the quadrature machinery behind them.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default absolute quadrature tolerance.
pub const QUAD_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

fn simpson<T: Real>(fa: T, fm: T, fb: T, h: T) -> T {
    (fa + T::lit(4.0) * fm + fb) * h / T::lit(6.0)
}

fn adaptive_step<T, F>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: usize,
) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let m = (a + b) * T::lit(0.5);
    let lm = (a + m) * T::lit(0.5);
    let rm = (m + b) * T::lit(0.5);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = left + right - whole;
    if err.abs() <= T::lit(15.0) * tol {
        return Ok(left + right + err / T::lit(15.0));
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "adaptive refinement exhausted on [{a}, {b}]"
        )));
    }
    let half_tol = tol * T::lit(0.5);
    Ok(adaptive_step(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + adaptive_step(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn integrate<T, F>(f: F, a: T, b: T, tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    if a == b {
        return Ok(T::zero());
    }
    let m = (a + b) * T::lit(0.5);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// 16-point Gauss-Legendre nodes and weights on [-1, 1] (positive half;
/// the rule is symmetric). Used as the independent cross-check scheme.
const GL16: [(f64, f64); 8] = [
    (0.0950125098376374, 0.1894506104550685),
    (0.2816035507792589, 0.1826034150449236),
    (0.4580167776572274, 0.1691565193950025),
    (0.6178762444026438, 0.1495959888165767),
    (0.7554044083550030, 0.1246289712555339),
    (0.8656312023878318, 0.0951585116824928),
    (0.9445750230732326, 0.0622535239386479),
    (0.9894009349916499, 0.0271524594117541),
];

/// Fixed high-order quadrature: composite 16-point Gauss-Legendre over
/// `panels` equal panels.
pub fn gauss_legendre<T, F>(f: F, a: T, b: T, panels: usize) -> T
where
    T: Real,
    F: Fn(T) -> T,
{
    assert!(panels >= 1);
    let width = (b - a) / T::from_usize(panels).unwrap();
    let half = T::lit(0.5);
    let mut total = T::zero();
    for i in 0..panels {
        let lo = a + width * T::from_usize(i).unwrap();
        let mid = lo + width * half;
        let scale = width * half;
        for &(x, w) in &GL16 {
            let (x, w) = (T::lit(x), T::lit(w));
            total = total + w * scale * (f(mid + scale * x) + f(mid - scale * x));
        }
    }
    total
}

// ---------------------------------------------------------------------------
// The sqrt(sin) integral and the Omega profile
// ---------------------------------------------------------------------------

/// Integral of sqrt(sin x) over [a, b] within [0, pi], to 1e-12 absolute.
/// The integrand has square-root endpoints at 0 and pi; substituting
/// x = u^2 on the left half and x = pi - u^2 on the right half (where
/// sin(pi - u^2) = sin(u^2)) makes both pieces smooth.
pub fn sqrt_sin_integral<T: Real>(a: T, b: T) -> Result<T> {
    if !(a >= T::zero() && a <= b && b <= T::PI()) {
        return Err(Error::Domain(format!(
            "sqrt-sin integral needs 0 <= a <= b <= pi, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(T::zero());
    }
    let g = |u: T| {
        let x = u * u;
        T::lit(2.0) * u * x.sin().max(T::zero()).sqrt()
    };
    let c = (a + b) * T::lit(0.5);
    let tol = T::lit(QUAD_TOL * 0.5);
    let left = integrate(g, a.sqrt(), c.sqrt(), tol)?;
    let right = integrate(g, (T::PI() - b).sqrt(), (T::PI() - c).sqrt(), tol)?;
    Ok(left + right)
}

/// The limit value at alpha -> 0+: 1/(sqrt6 pi log 2), also |Omega(pi)|.
pub fn omega_limit_at_zero<T: Real>() -> T {
    (T::lit(6.0).sqrt() * T::PI() * T::lit(2.0).ln()).recip()
}

/// The real-ray slope constant sqrt6 / (3 pi log 2) of the dimension
/// expansion d(delta) = 1 - c sqrt(|delta|) + o(sqrt(|delta|)) on the
/// negative real axis; approximately 0.375.
pub fn slope_constant<T: Real>() -> T {
    T::lit(6.0).sqrt() / (T::lit(3.0) * T::PI() * T::lit(2.0).ln())
}

/// The asymptotic profile Omega_{-2}(alpha) on (0, 2 pi), mirrored through
/// alpha -> 2 pi - alpha on (pi, 2 pi).
pub fn omega<T: Real>(alpha: T) -> Result<T> {
    let two_pi = T::PI() + T::PI();
    if !(alpha > T::zero() && alpha < two_pi) {
        return Err(Error::Domain(format!(
            "omega is defined on (0, 2 pi), got {alpha}"
        )));
    }
    let a = if alpha > T::PI() { two_pi - alpha } else { alpha };
    let integral = sqrt_sin_integral(a, T::PI())?;
    // max(., 0): sin(pi) can round to a tiny negative value at low precision.
    let sin_sqrt = a.sin().max(T::zero()).sqrt();
    Ok(omega_limit_at_zero::<T>() * (a.cos() - T::lit(0.5) * sin_sqrt * integral))
}

/// The unique zero of Omega on (0, pi/2); uniqueness is asserted by a
/// sign scan at 1e-2 resolution before bisecting.
pub fn alpha_zero<T: Real>(tol: T) -> Result<T> {
    if tol < T::lit(1e-10) {
        return Err(Error::Domain(format!(
            "alpha_zero tolerance must be >= 1e-10, got {tol}"
        )));
    }
    let step = T::lit(1e-2);
    let hi = T::PI() * T::lit(0.5);
    let mut changes = Vec::new();
    let mut x = step;
    let mut fx = omega(x)?;
    loop {
        let x2 = (x + step).min(hi - T::lit(1e-6));
        if x2 <= x {
            break;
        }
        let f2 = omega(x2)?;
        if (fx > T::zero()) != (f2 > T::zero()) {
            changes.push((x, x2));
        }
        x = x2;
        fx = f2;
    }
    if changes.len() != 1 {
        return Err(Error::Domain(format!(
            "expected exactly one sign change of omega on (0, pi/2), found {}",
            changes.len()
        )));
    }
    let (mut lo, mut hi) = changes[0];
    let mut flo = omega(lo)?;
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        let fm = omega(mid)?;
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// Omega profile on an `n`-point grid over (0, 2 pi), endpoints excluded.
pub fn omega_profile<T: Real>(n: usize) -> Result<Vec<(T, T)>> {
    if n == 0 {
        return Err(Error::Empty("omega profile needs a nonempty grid".into()));
    }
    let two_pi = T::PI() + T::PI();
    let grid = |i: usize| two_pi * T::from_usize(i).unwrap() / T::from_usize(n + 1).unwrap();
    let mut out: Vec<(T, T)> = Vec::with_capacity(n);
    for i in 1..=n {
        let a = grid(i);
        // The grid is symmetric about pi; mirrored points share one omega
        // evaluation so the profile symmetry is exact by construction.
        let value = if 2 * i > n + 1 {
            out[n - i].1
        } else {
            omega(a)?
        };
        out.push((a, value));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Key integrals and K constants
// ---------------------------------------------------------------------------

/// gamma_{alpha,R} = arctan(sin(alpha) / (3 R^2)).
pub fn gamma_angle<T: Real>(alpha: T, r: T) -> T {
    (alpha.sin() / (T::lit(3.0) * r * r)).atan()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyIntegralKind {
    /// I_{alpha,R} at finite R.
    FiniteR,
    /// The R -> infinity limit I_alpha.
    LimitR,
}

#[derive(Clone, Copy, Debug)]
pub struct KeyIntegralValue<T> {
    pub alpha: T,
    pub r: T,
    pub value: T,
    /// Present only for the finite-R form.
    pub gamma: Option<T>,
    pub kind: KeyIntegralKind,
}

fn check_key_params<T: Real>(alpha: T, r: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::PI()) {
        return Err(Error::Domain(format!(
            "key integral needs alpha in (0, pi], got {alpha}"
        )));
    }
    if r < T::one() {
        return Err(Error::Domain(format!("key integral needs R >= 1, got {r}")));
    }
    Ok(())
}

/// I_{alpha,R} (finite R), I_{pi,R} = sqrt6 - 2/R (degenerate case), or
/// the limit I_alpha = -sqrt6 cos(alpha) + (sqrt6/2) sqrt(sin alpha)
/// Int_alpha^pi sqrt(sin).
pub fn key_integral<T: Real>(alpha: T, r: T, kind: KeyIntegralKind) -> Result<KeyIntegralValue<T>> {
    check_key_params(alpha, r)?;
    let s6 = T::lit(6.0).sqrt();
    let half = T::lit(0.5);
    match kind {
        KeyIntegralKind::LimitR => {
            let value = -s6 * alpha.cos() + s6 * half * alpha.sin().sqrt() * sqrt_sin_integral(alpha, T::PI())?;
            Ok(KeyIntegralValue {
                alpha,
                r,
                value,
                gamma: None,
                kind,
            })
        }
        KeyIntegralKind::FiniteR => {
            if alpha == T::PI() {
                return Ok(KeyIntegralValue {
                    alpha,
                    r,
                    value: s6 - T::lit(2.0) / r,
                    gamma: Some(T::zero()),
                    kind,
                });
            }
            let gamma = gamma_angle(alpha, r);
            let ratio = ((T::lit(2.0) * gamma).sin() / alpha.sin()).sqrt();
            let value = s6 * alpha.cos() * (ratio - T::one())
                + s6 * half * alpha.sin().sqrt()
                    * sqrt_sin_integral(alpha, T::PI() - T::lit(2.0) * gamma)?;
            Ok(KeyIntegralValue {
                alpha,
                r,
                value,
                gamma: Some(gamma),
                kind,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KConstantKind {
    /// Integral of 1/|z| over the arc (closed form).
    InvAbs,
    /// Integral of 1/|z|^2 over the arc (quadrature; closed form at pi).
    InvAbsSq,
}

/// The K_{alpha,R} constants of the arc-length integrals.
pub fn k_constant<T: Real>(alpha: T, r: T, kind: KConstantKind) -> Result<T> {
    check_key_params(alpha, r)?;
    match kind {
        KConstantKind::InvAbs => {
            Ok(T::lit(1.5).ln() + T::lit(2.0) * (r / (alpha * T::lit(0.5)).sin()).ln())
        }
        KConstantKind::InvAbsSq => {
            if alpha == T::PI() {
                return Ok(T::lit(6.0).sqrt() - T::lit(2.0) / r);
            }
            let gamma = gamma_angle(alpha, r);
            let lo = (alpha - T::PI()) * T::lit(0.5);
            let hi = -gamma;
            // Smooth on the closed interval for alpha < pi.
            let integral = integrate(
                |t: T| (-(T::lit(2.0) * t).sin()).sqrt().recip(),
                lo,
                hi,
                T::lit(QUAD_TOL),
            )?;
            Ok(T::lit(2.0) * T::lit(1.5).sqrt() / alpha.sin().sqrt() * integral)
        }
    }
}
