//! Closed-form profile tests: quadrature, the Omega profile, its root, the
//! key integrals, and the K constants. Reference values are frozen from
//! independent oracles (Beta-function identity, independent quadrature).

use juliadim::asymptotics::{
    self, KConstantKind, KeyIntegralKind,
};
use std::f64::consts::PI;

/// Frozen oracle: B(3/4, 1/2) = Gamma(3/4) Gamma(1/2) / Gamma(5/4)
/// = integral of sqrt(sin) over [0, pi].
const SQRT_SIN_FULL: f64 = 2.396280469471185;

/// Frozen oracle: Omega(pi/2), independent adaptive quadrature.
const OMEGA_HALF_PI: f64 = -0.11231213882767331;

/// Frozen oracle: Omega(pi/4).
const OMEGA_QUARTER_PI: f64 = -0.02054565930266959;

/// Frozen oracle: Omega(3pi/4).
const OMEGA_THREE_QUARTER_PI: f64 = -0.1683400905566664;

/// Frozen oracle: the root of Omega on (0, pi/2).
const ALPHA_ZERO: f64 = 0.64740639131657;

/// Frozen oracle: K_{pi/2,2} for the 1/|z| integrand,
/// log(3/2) + 2 log(2 / sin(pi/4)).
const K_HALF_PI_2: f64 = 2.484906649788001;

// ---------------------------------------------------------------------------
// Quadrature building blocks
// ---------------------------------------------------------------------------

#[test]
fn sqrt_sin_integral_against_beta_oracle() {
    // Independent closed form via the Gamma function (statrs).
    use statrs::function::gamma::gamma;
    let beta = gamma(0.75) * gamma(0.5) / gamma(1.25);
    assert!((beta - SQRT_SIN_FULL).abs() < 1e-12, "frozen oracle stale");
    let v = asymptotics::sqrt_sin_integral(0.0, PI).unwrap();
    assert!((v - beta).abs() < 1e-11, "got {v}, oracle {beta}");
}

#[test]
fn sqrt_sin_integral_degenerate_and_additive() {
    assert_eq!(asymptotics::sqrt_sin_integral(1.0, 1.0).unwrap(), 0.0);
    let left = asymptotics::sqrt_sin_integral(0.0, PI / 2.0).unwrap();
    let right = asymptotics::sqrt_sin_integral(PI / 2.0, PI).unwrap();
    let whole = asymptotics::sqrt_sin_integral(0.0, PI).unwrap();
    assert!((left + right - whole).abs() < 1e-12);
    // sin is symmetric about pi/2.
    assert!((left - right).abs() < 1e-12);
    // Domain errors.
    assert!(asymptotics::sqrt_sin_integral(-0.1, 1.0).is_err());
    assert!(asymptotics::sqrt_sin_integral(0.5, 0.4).is_err());
    assert!(asymptotics::sqrt_sin_integral(0.0, PI + 0.1).is_err());
}

#[test]
fn quadrature_cross_validation() {
    // Adaptive Simpson vs composite Gauss-Legendre on every integrand the
    // module actually uses, after the same smoothing substitutions.
    let g = |u: f64| 2.0 * u * (u * u).sin().max(0.0).sqrt();
    for (a, b) in [(0.0, PI), (0.3, 2.9), (PI / 2.0, PI), (0.1, 0.2)] {
        let c = 0.5 * (a + b);
        let gl = asymptotics::gauss_legendre(g, a.sqrt(), c.sqrt(), 8)
            + asymptotics::gauss_legendre(g, (PI - b).sqrt(), (PI - c).sqrt(), 8);
        let ad = asymptotics::sqrt_sin_integral(a, b).unwrap();
        assert!((gl - ad).abs() < 1e-10, "[{a}, {b}]: {ad} vs {gl}");
    }
    // The K-constant quadrature integrand (smooth for alpha < pi).
    let alpha: f64 = 2.0;
    let gamma = asymptotics::gamma_angle(alpha, 2.0);
    let f = |t: f64| 1.0 / (-(2.0 * t).sin()).sqrt();
    let lo = (alpha - PI) / 2.0;
    let gl = asymptotics::gauss_legendre(f, lo, -gamma, 16);
    let ad = asymptotics::integrate(f, lo, -gamma, 1e-12).unwrap();
    assert!((gl - ad).abs() < 1e-10);
}

// ---------------------------------------------------------------------------
// Omega profile
// ---------------------------------------------------------------------------

#[test]
fn omega_at_pi_is_closed_form() {
    // sin(pi) kills the integral term: Omega(pi) = -1/(sqrt6 pi log 2).
    let independent = -1.0 / (6.0f64.sqrt() * PI * 2.0f64.ln());
    let v = asymptotics::omega(PI).unwrap();
    assert!((v - independent).abs() < 1e-12);
    assert!((v + 0.187477).abs() < 2e-6);
    assert!((v + asymptotics::omega_limit_at_zero::<f64>()).abs() < 1e-15);
}

#[test]
fn omega_frozen_values() {
    for (alpha, oracle) in [
        (PI / 2.0, OMEGA_HALF_PI),
        (PI / 4.0, OMEGA_QUARTER_PI),
        (3.0 * PI / 4.0, OMEGA_THREE_QUARTER_PI),
    ] {
        let v = asymptotics::omega(alpha).unwrap();
        assert!((v - oracle).abs() < 1e-9, "Omega({alpha}) = {v}, oracle {oracle}");
    }
}

#[test]
fn omega_mirror_symmetry() {
    for alpha in [0.3, PI / 4.0, 1.2, PI / 2.0, 2.8] {
        let a = asymptotics::omega(alpha).unwrap();
        let b = asymptotics::omega(2.0 * PI - alpha).unwrap();
        // The fold 2pi - (2pi - alpha) is exact only up to rounding of the
        // argument; the values agree to quadrature precision.
        assert!((a - b).abs() < 5e-12);
    }
}

#[test]
fn omega_limit_and_small_alpha() {
    let limit = asymptotics::omega_limit_at_zero::<f64>();
    assert!((limit - 0.18747745142280206).abs() < 1e-15);
    assert!((asymptotics::omega(1e-3).unwrap() - limit).abs() < 0.02);
    assert!((asymptotics::omega(1e-4).unwrap() - limit).abs() < 0.01);
    // Domain: open interval.
    assert!(asymptotics::omega(0.0).is_err());
    assert!(asymptotics::omega(2.0 * PI).is_err());
}

#[test]
fn omega_monotone_decreasing_on_0_pi() {
    // Central differences on a 1e-3 grid: dOmega/dalpha < 0 throughout.
    let h = 1e-3;
    let mut alpha = 2.0 * h;
    while alpha < PI - 2.0 * h {
        let lo = asymptotics::omega(alpha - h).unwrap();
        let hi = asymptotics::omega(alpha + h).unwrap();
        assert!(hi < lo, "profile not decreasing near alpha = {alpha}");
        alpha += h;
    }
}

#[test]
fn omega_sign_pattern() {
    let a0 = asymptotics::alpha_zero(1e-10).unwrap();
    for k in 1..20 {
        let alpha = a0 * (k as f64) / 20.0;
        assert!(asymptotics::omega(alpha).unwrap() > 0.0);
    }
    for k in 1..=20 {
        let alpha = a0 + (PI - a0) * (k as f64) / 20.0;
        assert!(asymptotics::omega(alpha).unwrap() < 0.0);
    }
}

#[test]
fn omega_profile_grid() {
    let prof = asymptotics::omega_profile::<f64>(101).unwrap();
    assert_eq!(prof.len(), 101);
    assert!(prof.iter().all(|(a, _)| *a > 0.0 && *a < 2.0 * PI));
    // Mirror symmetry of the grid itself: point i and point n-1-i pair up.
    let n = prof.len();
    for i in 0..n / 2 {
        assert!((prof[i].1 - prof[n - 1 - i].1).abs() < 1e-15);
    }
    assert!(asymptotics::omega_profile::<f64>(0).is_err());
}

// ---------------------------------------------------------------------------
// alpha_zero
// ---------------------------------------------------------------------------

#[test]
fn alpha_zero_value_and_degrees() {
    let a0 = asymptotics::alpha_zero(1e-10).unwrap();
    assert!((a0 - ALPHA_ZERO).abs() < 1e-8, "root {a0} vs frozen {ALPHA_ZERO}");
    assert!(a0 > 0.628 && a0 < 0.663);
    let deg = a0.to_degrees();
    assert!(deg > 36.0 && deg < 38.0);
    assert!((2.0 * deg - 74.0).abs() < 2.0);
    assert!(asymptotics::omega(a0).unwrap().abs() < 1e-9);
    assert!(asymptotics::alpha_zero(1e-12).is_err());
}

// ---------------------------------------------------------------------------
// Key integrals
// ---------------------------------------------------------------------------

#[test]
fn key_integral_at_pi() {
    let v = asymptotics::key_integral(PI, 1.0, KeyIntegralKind::FiniteR).unwrap();
    assert!((v.value - (6.0f64.sqrt() - 2.0)).abs() < 1e-14);
    assert_eq!(v.gamma, Some(0.0));
    let v = asymptotics::key_integral(PI, 4.0, KeyIntegralKind::FiniteR).unwrap();
    assert!((v.value - (6.0f64.sqrt() - 0.5)).abs() < 1e-14);
}

#[test]
fn key_integral_continuity_at_pi() {
    let r = 2.0;
    let at_pi = asymptotics::key_integral(PI, r, KeyIntegralKind::FiniteR)
        .unwrap()
        .value;
    let near = asymptotics::key_integral(PI - 1e-4, r, KeyIntegralKind::FiniteR)
        .unwrap()
        .value;
    assert!((near - at_pi).abs() < 1e-2, "{near} vs {at_pi}");
    let nearer = asymptotics::key_integral(PI - 1e-6, r, KeyIntegralKind::FiniteR)
        .unwrap()
        .value;
    assert!((nearer - at_pi).abs() < (near - at_pi).abs());
}

#[test]
fn key_integral_identity_with_omega() {
    // Omega(alpha) = -I_alpha / (6 pi log 2) on a 100-point grid.
    let scale = 6.0 * PI * 2.0f64.ln();
    for k in 1..=100 {
        let alpha = PI * (k as f64) / 100.0;
        let i_a = asymptotics::key_integral(alpha, 1.0, KeyIntegralKind::LimitR)
            .unwrap()
            .value;
        let omega = asymptotics::omega(alpha).unwrap();
        assert!(
            (omega + i_a / scale).abs() < 1e-12,
            "identity fails at alpha = {alpha}"
        );
    }
}

#[test]
fn key_integral_r_limit_monotone() {
    for alpha in [PI / 2.0, PI] {
        let limit = asymptotics::key_integral(alpha, 1.0, KeyIntegralKind::LimitR)
            .unwrap()
            .value;
        let mut prev = f64::INFINITY;
        for r in [2.0, 4.0, 8.0, 16.0] {
            let fin = asymptotics::key_integral(alpha, r, KeyIntegralKind::FiniteR)
                .unwrap()
                .value;
            let gap = (fin - limit).abs();
            assert!(gap < prev, "|I_(alpha,R) - I_alpha| not shrinking at R = {r}");
            prev = gap;
        }
        // At alpha = pi the gap is exactly 2/R, i.e. 0.125 at R = 16.
        assert!(prev <= 0.13);
    }
    // limit_R carries no gamma.
    let v = asymptotics::key_integral(1.0, 1.0, KeyIntegralKind::LimitR).unwrap();
    assert!(v.gamma.is_none());
}

#[test]
fn key_integral_domain() {
    assert!(asymptotics::key_integral(0.0, 1.0, KeyIntegralKind::FiniteR).is_err());
    assert!(asymptotics::key_integral(PI + 0.1, 1.0, KeyIntegralKind::FiniteR).is_err());
    assert!(asymptotics::key_integral(1.0, 0.5, KeyIntegralKind::FiniteR).is_err());
}

// ---------------------------------------------------------------------------
// K constants
// ---------------------------------------------------------------------------

#[test]
fn k_constant_closed_forms() {
    let v = asymptotics::k_constant(PI, 1.0, KConstantKind::InvAbs).unwrap();
    assert!((v - 1.5f64.ln()).abs() < 1e-14);
    let v = asymptotics::k_constant(PI / 2.0, 2.0, KConstantKind::InvAbs).unwrap();
    assert!((v - K_HALF_PI_2).abs() < 1e-12);
    for r in [1.0, 2.0, 5.0] {
        let v = asymptotics::k_constant(PI, r, KConstantKind::InvAbsSq).unwrap();
        assert!((v - (6.0f64.sqrt() - 2.0 / r)).abs() < 1e-14);
    }
}

#[test]
fn k_constant_quadrature_consistent_near_pi() {
    // The quadrature branch approaches the closed form as alpha -> pi-.
    let r = 2.0;
    let closed = asymptotics::k_constant(PI, r, KConstantKind::InvAbsSq).unwrap();
    let near = asymptotics::k_constant(PI - 1e-3, r, KConstantKind::InvAbsSq).unwrap();
    assert!((near - closed).abs() < 1e-2, "{near} vs {closed}");
}

#[test]
fn slope_constant_value() {
    let c = asymptotics::slope_constant::<f64>();
    let independent = 6.0f64.sqrt() / (3.0 * PI * 2.0f64.ln());
    assert!((c - independent).abs() < 1e-15);
    assert!((c - 0.375).abs() < 5e-4);
    assert!(c > 0.362);
    // Structural relation to the profile limit: c = 2 |Omega(pi)|.
    assert!((c - 2.0 * asymptotics::omega_limit_at_zero::<f64>()).abs() < 1e-15);
}

// ---------------------------------------------------------------------------
// f32 smoke test
// ---------------------------------------------------------------------------

#[test]
fn f32_omega_smoke() {
    // Only structural checks at single precision (the 1e-12 quadrature
    // tolerances are meaningless there).
    let v = asymptotics::omega(std::f32::consts::PI).unwrap();
    let oracle = -1.0f32 / (6.0f32.sqrt() * std::f32::consts::PI * std::f32::consts::LN_2);
    assert!((v - oracle).abs() < 1e-5);
}
