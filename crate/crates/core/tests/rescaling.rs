//! Rescaled-window geometry tests: hyperbola arcs, Hausdorff distance, and
//! the near-fixed-point location bands. The heavier window-convergence
//! studies live in the acceptance suite.

use juliadim::rescaling::{self, Branch, HyperbolaArc};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// endpoints and arc geometry
// ---------------------------------------------------------------------------

#[test]
fn endpoints_at_half_pi() {
    let (b, z, gamma) = rescaling::hyperbola_endpoints(PI / 2.0, 1.0).unwrap();
    let s = 6.0f64.sqrt() / 3.0 * (PI / 4.0).sin();
    assert!((b - c(s, -s)).norm() < 1e-14);
    assert!((b.re - 0.57735).abs() < 1e-5);
    assert!((z - c(1.0, -1.0 / 3.0)).norm() < 1e-14);
    assert!((gamma - (1.0f64 / 3.0).atan()).abs() < 1e-14);
    assert!((gamma - 0.32175).abs() < 1e-5);
}

#[test]
fn endpoints_degenerate_at_pi() {
    let (b, z, gamma) = rescaling::hyperbola_endpoints(PI, 2.0).unwrap();
    assert!(gamma.abs() < 1e-15);
    // b* lands on the real axis at sqrt(6)/3 (up to the rounding of sin pi).
    assert!((b.re - 6.0f64.sqrt() / 3.0).abs() < 1e-12);
    assert!(b.im.abs() < 1e-12);
    assert!((z - c(2.0, 0.0)).norm() < 1e-15);
}

#[test]
fn endpoint_product_identity() {
    // Re(b*) Im(b*) = -(1/3) sin(alpha), from 2 sin(a/2) cos(a/2) = sin a.
    for alpha in [0.3, 1.0, PI / 2.0, 2.5, 3.0] {
        let (b, z, gamma) = rescaling::hyperbola_endpoints(alpha, 1.7).unwrap();
        assert!((b.re * b.im + alpha.sin() / 3.0).abs() < 1e-14);
        // arg z* = -gamma.
        assert!((z.arg() + gamma).abs() < 1e-12);
    }
}

#[test]
fn arc_satisfies_hyperbola_identity() {
    for alpha in [0.5, PI / 2.0, 2.0, 3.0] {
        for branch in [Branch::Plus, Branch::Minus] {
            let arc = HyperbolaArc::new(alpha, 2.0, branch).unwrap();
            let pts = arc.sample(257);
            assert_eq!(pts.len(), 257);
            for z in &pts {
                assert!(
                    (z.re * z.im + alpha.sin() / 3.0).abs() < 1e-12,
                    "xy identity fails at alpha = {alpha}"
                );
            }
            // Endpoints match Eq. (endp) up to the branch mirror.
            let (b, zs, _) = rescaling::hyperbola_endpoints(alpha, 2.0).unwrap();
            let sign = if branch == Branch::Plus { 1.0 } else { -1.0 };
            assert!((pts[0] - sign * b).norm() < 1e-12);
            assert!((pts[256] - sign * zs).norm() < 1e-12);
        }
    }
}

#[test]
fn arc_degenerates_at_pi() {
    let arc = HyperbolaArc::new(PI, 2.0, Branch::Plus).unwrap();
    let pts = arc.sample(100);
    let x0 = 6.0f64.sqrt() / 3.0;
    for z in &pts {
        assert_eq!(z.im, 0.0);
        assert!(z.re >= x0 - 1e-15 && z.re <= 2.0 + 1e-15);
    }
    assert!((pts[0].re - x0).abs() < 1e-15);
    assert!((pts[99].re - 2.0).abs() < 1e-15);
    // The minus branch mirrors to [-2, -sqrt6/3].
    let neg = HyperbolaArc::new(PI, 2.0, Branch::Minus).unwrap().sample(10);
    assert!(neg.iter().all(|z| z.re < 0.0));
}

#[test]
fn arc_domain_checks() {
    assert!(HyperbolaArc::new(0.0, 2.0, Branch::Plus).is_err());
    assert!(HyperbolaArc::new(PI + 0.1, 2.0, Branch::Plus).is_err());
    assert!(HyperbolaArc::new(1.0, 0.5, Branch::Plus).is_err());
    let both = rescaling::arc_both_branches(PI / 2.0, 2.0, 64).unwrap();
    assert_eq!(both.len(), 128);
    // Mirror symmetry of the two-branch set.
    for i in 0..64 {
        assert_eq!(both[64 + i], -both[i]);
    }
}

// ---------------------------------------------------------------------------
// Hausdorff distance
// ---------------------------------------------------------------------------

#[test]
fn hausdorff_trivia() {
    let x = vec![c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.5)];
    assert_eq!(rescaling::hausdorff_distance(&x, &x).unwrap(), 0.0);
    let d = rescaling::hausdorff_distance(&[c(0.0, 0.0)], &[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
    assert!((d - 4.0).abs() < 1e-15);
    assert!(rescaling::hausdorff_distance(&[], &x).is_err());
}

#[test]
fn hausdorff_symmetry_random_sets() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let gen = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| {
            (0..n)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect::<Vec<_>>()
        };
        let x = gen(&mut rng, 40);
        let y = gen(&mut rng, 25);
        let xy = rescaling::hausdorff_distance(&x, &y).unwrap();
        let yx = rescaling::hausdorff_distance(&y, &x).unwrap();
        assert_eq!(xy, yx);
        assert!(xy >= 0.0);
    }
}

// ---------------------------------------------------------------------------
// rescaled windows
// ---------------------------------------------------------------------------

#[test]
fn rescaled_window_bounds_and_scaling() {
    let delta = c(-0.04, 0.0);
    let r = 2.0;
    let win = rescaling::rescaled_window(delta, r, 14).unwrap();
    assert!(!win.is_empty());
    for z in &win {
        assert!(z.re.abs() <= r + 1e-12);
    }
    // Point-for-point scaling of the unrescaled window set.
    let raw = juliadim::cylinders::window_set(delta, r, 14).unwrap();
    assert_eq!(raw.points.len(), win.len());
    let scale = 1.0 / 0.04f64.sqrt();
    for (a, b) in raw.points.iter().zip(&win) {
        assert_eq!(*a * scale, *b);
    }
}

#[test]
fn rescaled_window_near_degenerate_arc() {
    // alpha = pi: points cluster near [sqrt6/3, 2] u [-2, -sqrt6/3].
    let delta = c(-0.01, 0.0);
    let win = rescaling::rescaled_window(delta, 2.0, 18).unwrap();
    let arc = rescaling::arc_both_branches(PI, 2.0, 512).unwrap();
    let mut worst = 0.0f64;
    for z in &win {
        let d = arc.iter().map(|a| (z - a).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    assert!(worst < 0.15, "window strays {worst} from the degenerate arc");
}

#[test]
fn rescaled_window_xy_concentration() {
    // alpha = pi/2: sampled x y values concentrate near -1/3.
    let delta = c(0.0, 0.01);
    let win = rescaling::rescaled_window(delta, 2.0, 18).unwrap();
    assert!(win.len() > 50);
    let mean_xy = win.iter().map(|z| z.re * z.im).sum::<f64>() / (win.len() as f64);
    assert!((mean_xy + 1.0 / 3.0).abs() < 0.05, "mean xy = {mean_xy}");
}

#[test]
fn window_symmetry() {
    let delta = c(0.0, 0.01);
    let win = rescaling::rescaled_window(delta, 2.0, 14).unwrap();
    let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
    let set: std::collections::HashSet<_> = win.iter().map(key).collect();
    for z in &win {
        assert!(set.contains(&key(&(-*z))), "mirror of {z} missing");
    }
}

#[test]
fn convergence_study_shape() {
    // Structural check at modest depth; the acceptance suite runs the full
    // depth-20 study.
    let reports = rescaling::convergence_study(PI, 2.0, &[0.04, 0.01], 16).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.d_h >= 0.0 && r.n_arc == 1024));
    assert!(reports[1].d_h < reports[0].d_h);
    // Schedule must decrease.
    assert!(rescaling::convergence_study(PI, 2.0, &[0.01, 0.04], 12).is_err());
}

#[test]
fn hausdorff_depth_stability() {
    // Fixed t, increasing depth: d_H non-increasing within 10% noise.
    let arc = rescaling::arc_both_branches(PI, 2.0, 512).unwrap();
    let mut prev = f64::INFINITY;
    for depth in [14, 16, 18] {
        let win = rescaling::rescaled_window(c(-0.01, 0.0), 2.0, depth).unwrap();
        let d = rescaling::hausdorff_distance(&win, &arc).unwrap();
        assert!(d <= prev * 1.1, "d_H grew from {prev} to {d} at depth {depth}");
        prev = d;
    }
}

// ---------------------------------------------------------------------------
// band checks
// ---------------------------------------------------------------------------

#[test]
fn band_check_small_real_delta() {
    let report = rescaling::band_check(c(-0.01, 0.0), 14).unwrap();
    assert!(!report.skipped);
    assert_eq!(report.band_violations, 0);
    assert_eq!(report.width_violations, 0);
    assert_eq!(report.n_points, 1 << 14);
}

#[test]
fn band_check_complex_delta() {
    let delta = Complex64::from_polar(0.02, 3.0 * PI / 4.0);
    let report = rescaling::band_check(delta, 14).unwrap();
    assert!(!report.skipped);
    assert_eq!(report.band_violations, 0);
    assert_eq!(report.width_violations, 0);
}

#[test]
fn band_check_skips_large_delta() {
    let report = rescaling::band_check(c(-0.2, 0.0), 10).unwrap();
    assert!(report.skipped);
    assert!(!report.note.is_empty());
}
