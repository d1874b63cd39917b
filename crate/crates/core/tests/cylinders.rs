//! Cylinder tests: itinerary geometry of the families, the lambda^{-n/2}
//! scale of the zero families, push-forward relations, the itinerary
//! classifier against word addresses, and the window sets.

use juliadim::cylinders::{self, CylinderId, Family};
use juliadim::dynamics::{self, Sign};
use num_complex::Complex64;
use std::collections::HashSet;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// family geometry
// ---------------------------------------------------------------------------

#[test]
fn plus2_zero_sits_right_and_maps_left() {
    // C^{+2}_0 has itinerary +,-: the point is in the right half-plane and
    // its image in the left one.
    let delta = c(-0.1, 0.0);
    let sample = cylinders::cylinder_points(delta, CylinderId::new(Family::Plus2, 0), 12).unwrap();
    assert!(sample.points.len() > 100);
    for (_, z) in &sample.points {
        assert!(z.re > 0.0, "C^+2_0 point {z} not in the right half-plane");
        let fz = dynamics::apply(delta, *z, 1);
        assert!(fz.re < 0.0, "image {fz} of {z} not in the left half-plane");
    }
}

#[test]
fn quadrant_cylinder_is_away_from_zero() {
    // C^{0+}_0 = J_{++} (itinerary +,+) stays near the fixed point side:
    // every point has |z| bounded below away from 0.
    let delta = c(-0.04, 0.0);
    let sample =
        cylinders::cylinder_points(delta, CylinderId::new(Family::ZeroPlus, 0), 12).unwrap();
    assert!(sample.min_abs() > 0.5, "min |z| = {}", sample.min_abs());
}

#[test]
fn zero_family_scale_is_lambda_to_minus_half_n() {
    // One constant K for all n: K^-1 <= |z| lambda^{n/2} <= K on C^{0+}_n,
    // valid while lambda^{-n/2} stays above sqrt|delta|. The log of the
    // inner radius decays with slope -log(lambda)/2 within 10%.
    let delta = c(-0.0001, 0.0);
    let lambda = dynamics::fixed_point(delta).unwrap().lambda.norm();
    let k_const = 4.0;
    let mut log_min = Vec::new();
    let mut diams = Vec::new();
    for n in 1u32..=6 {
        let id = CylinderId::new(Family::ZeroPlus, n);
        let sample = cylinders::cylinder_points(delta, id, n as usize + 10).unwrap();
        let scale = lambda.powf(f64::from(n) / 2.0);
        let lo = sample.min_abs() * scale;
        let hi = sample.max_abs() * scale;
        assert!(
            lo > 1.0 / k_const && hi < k_const,
            "n = {n}: scaled range [{lo}, {hi}] escapes [1/{k_const}, {k_const}]"
        );
        log_min.push((f64::from(n), sample.min_abs().ln()));
        diams.push(sample.diam_estimate);
    }
    // Least-squares slope of log(min |z|) against n.
    let m = log_min.len() as f64;
    let sx: f64 = log_min.iter().map(|p| p.0).sum();
    let sy: f64 = log_min.iter().map(|p| p.1).sum();
    let sxx: f64 = log_min.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = log_min.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let target = -lambda.ln() / 2.0;
    assert!(
        (slope / target - 1.0).abs() < 0.1,
        "scale slope {slope} vs -log(lambda)/2 = {target}"
    );
    // Diameters shrink monotonically at the same geometric rate.
    for w in diams.windows(2) {
        let ratio = w[1] / w[0];
        assert!(ratio > 0.3 && ratio < 0.7, "diameter ratio {ratio}");
    }
}

// ---------------------------------------------------------------------------
// push-forward relations
// ---------------------------------------------------------------------------

#[test]
fn zero_family_pushes_into_minus2_then_plus2() {
    // f(C^{0+}_n) lands in C^{-2}_{n-1} and f^2(C^{0+}_n) in C^{+2}_{n-2},
    // verified pointwise through the itinerary classifier.
    let delta = c(-0.01, 0.0);
    let n = 3u32;
    let sample =
        cylinders::cylinder_points(delta, CylinderId::new(Family::ZeroPlus, n), n as usize + 10)
            .unwrap();
    for (_, z) in &sample.points {
        let fz = dynamics::apply(delta, *z, 1);
        let id1 = cylinders::cylinder_measure_index(delta, fz).unwrap();
        assert_eq!(id1, CylinderId::new(Family::Minus2, n - 1), "f({z}) = {fz}");
        let ffz = dynamics::apply(delta, *z, 2);
        let id2 = cylinders::cylinder_measure_index(delta, ffz).unwrap();
        assert_eq!(id2, CylinderId::new(Family::Plus2, n - 2), "f^2({z}) = {ffz}");
    }
}

// ---------------------------------------------------------------------------
// itinerary classifier
// ---------------------------------------------------------------------------

#[test]
fn classifier_agrees_with_word_addresses() {
    // For sampled Julia points the forward-orbit classification matches the
    // backward word address whenever the word is long enough to decide.
    let delta = c(-0.1, 0.0);
    let depth = 12;
    let sample = dynamics::julia_sample(delta, depth, dynamics::SampleMode::FullTree, 0).unwrap();
    let mut checked = 0;
    for pt in &sample.points {
        let id = cylinders::cylinder_measure_index(delta, pt.z).unwrap();
        if id.is_sentinel() || id.index as usize + 2 > depth {
            continue;
        }
        assert!(
            cylinders::word_matches(id, &pt.word),
            "classifier says {:?} n = {} but word {} disagrees (z = {})",
            id.family,
            id.index,
            pt.word,
            pt.z
        );
        checked += 1;
    }
    assert!(checked > 3000, "only {checked} points classified");
}

#[test]
fn fixed_points_get_the_sentinel() {
    let delta = c(-0.1, 0.0);
    let p = dynamics::fixed_point(delta).unwrap().p;
    let at_p = cylinders::cylinder_measure_index(delta, p).unwrap();
    assert!(at_p.is_sentinel());
    assert_eq!(at_p.family, Family::Plus2);
    let at_mp = cylinders::cylinder_measure_index(delta, -p).unwrap();
    assert!(at_mp.is_sentinel());
    assert_eq!(at_mp.family, Family::Minus2);
    assert_eq!(cylinders::SENTINEL_INDEX, u32::MAX);
}

#[test]
fn plus2_family_partitions_the_right_side() {
    // Every sampled point with itinerary starting + lies in exactly one
    // C^{+2}_n (decided within the word length) unless all its recorded
    // symbols are + -- which only happens near the fixed point p.
    let delta = c(-0.04, 0.0);
    let depth = 12;
    let p = dynamics::fixed_point(delta).unwrap().p;
    let sample = dynamics::julia_sample(delta, depth, dynamics::SampleMode::FullTree, 0).unwrap();
    for pt in &sample.points {
        if pt.word.sign_from_end(0) != Sign::Plus {
            continue;
        }
        let matches: Vec<u32> = (0..=(depth as u32 - 2))
            .filter(|&n| cylinders::word_matches(CylinderId::new(Family::Plus2, n), &pt.word))
            .collect();
        let all_plus = (0..depth).all(|k| pt.word.sign_from_end(k) == Sign::Plus);
        if all_plus {
            assert!(matches.is_empty());
            assert!((pt.z - p).norm() < 1e-2, "all-plus word far from p: {}", pt.z);
        } else {
            assert_eq!(matches.len(), 1, "point {} matches {:?}", pt.z, matches);
        }
    }
}

// ---------------------------------------------------------------------------
// window sets
// ---------------------------------------------------------------------------

#[test]
fn window_set_basics() {
    let delta = c(-0.04, 0.0);
    let w1 = cylinders::window_set(delta, 1.0, 16).unwrap();
    assert!(!w1.points.is_empty());
    assert!(!w1.sparse);
    let cut = 0.04f64.sqrt();
    for z in &w1.points {
        assert!(z.re.abs() <= cut, "|Re {z}| > R sqrt(t)");
    }
    // The R = 2 window contains the R = 1 window.
    let w2 = cylinders::window_set(delta, 2.0, 16).unwrap();
    assert!(w2.points.len() > w1.points.len());
    let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
    let big: HashSet<_> = w2.points.iter().map(key).collect();
    assert!(w1.points.iter().all(|z| big.contains(&key(z))));
}

#[test]
fn window_fraction_shrinks_with_delta() {
    // The fraction of depth-16 sample points inside N_{delta,1} scales down
    // with sqrt|delta|.
    let frac = |delta: Complex64| {
        let w = cylinders::window_set(delta, 1.0, 16).unwrap();
        w.points.len() as f64 / f64::from(1u32 << 16)
    };
    let f_big = frac(c(-0.04, 0.0));
    let f_small = frac(c(-0.01, 0.0));
    assert!(f_small < f_big, "window fractions {f_small} vs {f_big}");
    assert!(f_big < 0.5);
}

#[test]
fn window_set_flags_and_refusals() {
    // Shallow depth leaves fewer than 50 points in a narrow window.
    let w = cylinders::window_set(c(-0.04, 0.0), 1.0, 6).unwrap();
    assert_eq!(w.sparse, w.points.len() < 50);
    assert!(w.sparse);
    // delta = 0 and R < 1 are refused.
    assert!(cylinders::window_set(c(0.0, 0.0), 1.0, 10).is_err());
    assert!(cylinders::window_set(c(-0.04, 0.0), 0.5, 10).is_err());
}

// ---------------------------------------------------------------------------
// sampling plumbing
// ---------------------------------------------------------------------------

#[test]
fn cylinder_points_refusals() {
    let delta = c(-0.1, 0.0);
    // Sentinel ids carry no sample.
    let sentinel = CylinderId::new(Family::Plus2, cylinders::SENTINEL_INDEX);
    assert!(cylinders::cylinder_points(delta, sentinel, 12).is_err());
    // The depth must cover the pattern.
    let err = cylinders::cylinder_points(delta, CylinderId::new(Family::Plus2, 8), 4).unwrap_err();
    assert!(err.to_string().contains("depth"));
    // The quadrant set J_{++} only needs two symbols.
    assert!(cylinders::cylinder_points(delta, CylinderId::new(Family::ZeroPlus, 0), 2).is_ok());
}

#[test]
fn csv_row_shape() {
    let sample =
        cylinders::cylinder_points(c(-0.1, 0.0), CylinderId::new(Family::Minus2, 1), 10).unwrap();
    assert_eq!(
        juliadim::cylinders::CylinderSample::<f64>::CSV_HEADER,
        "family,n,count,diam,min_abs,max_abs"
    );
    let row = sample.csv_row();
    assert_eq!(row.split(',').count(), 6);
    assert!(row.starts_with("minus2,1,"));
}
