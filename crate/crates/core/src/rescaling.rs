//! Rescaled-window geometry: the limit hyperbola arcs H*_{alpha,R}, the
//! rescaled Julia windows N*_{delta,R}, Hausdorff-distance convergence
//! between them, and the location band checks near the fixed points.

use num_complex::Complex;
use rayon::prelude::*;

use crate::cylinders;
use crate::dynamics::{self, SampleMode};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// The limit arc H*_{alpha,R}: one branch of the hyperbola
/// x y = -(1/3) sin(alpha) between the endpoints b*_alpha and z*_{alpha,R},
/// in the polar parameterization h(t) e^{it} with
/// h(t)^2 (1/2) sin(2t) = -(1/3) sin(alpha), t in [(alpha - pi)/2, -gamma].
/// At alpha = pi (exactly) the arc degenerates to the real segment
/// [sqrt(6)/3, R] (and its mirror for the minus branch).
#[derive(Clone, Copy, Debug)]
pub struct HyperbolaArc<T> {
    alpha: T,
    r: T,
    branch: Branch,
}

/// Endpoints b* = (sqrt6/3)(sin(alpha/2) - i cos(alpha/2)),
/// z* = R - i sin(alpha)/(3R), and the angle gamma = arctan(sin(alpha)/(3R^2)).
pub fn hyperbola_endpoints<T: Real>(alpha: T, r: T) -> Result<(Cplx<T>, Cplx<T>, T)> {
    check_arc_params(alpha, r)?;
    let third = T::lit(1.0 / 3.0);
    let s6_3 = T::lit(6.0).sqrt() * third;
    let half = T::lit(0.5);
    let b = Complex::new(s6_3 * (alpha * half).sin(), -s6_3 * (alpha * half).cos());
    let z = Complex::new(r, -alpha.sin() * third / r);
    let gamma = (alpha.sin() / (T::lit(3.0) * r * r)).atan();
    Ok((b, z, gamma))
}

fn check_arc_params<T: Real>(alpha: T, r: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::PI()) {
        return Err(Error::Domain(format!(
            "arc angle must lie in (0, pi], got {alpha}"
        )));
    }
    if r < T::one() {
        return Err(Error::Domain(format!("arc radius must be >= 1, got {r}")));
    }
    Ok(())
}

impl<T: Real> HyperbolaArc<T> {
    pub fn new(alpha: T, r: T, branch: Branch) -> Result<Self> {
        check_arc_params(alpha, r)?;
        Ok(Self { alpha, r, branch })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `n` points along the arc, uniform in the polar parameter (uniform
    /// in x for the degenerate alpha = pi case).
    pub fn sample(&self, n: usize) -> Vec<Cplx<T>> {
        assert!(n >= 2);
        let sign = match self.branch {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        };
        let n1 = T::from_usize(n - 1).unwrap();
        if self.alpha == T::PI() {
            let x0 = T::lit(6.0).sqrt() / T::lit(3.0);
            return (0..n)
                .map(|i| {
                    let u = T::from_usize(i).unwrap() / n1;
                    Complex::new(sign * (x0 + (self.r - x0) * u), T::zero())
                })
                .collect();
        }
        let t0 = (self.alpha - T::PI()) * T::lit(0.5);
        let t1 = -(self.alpha.sin() / (T::lit(3.0) * self.r * self.r)).atan();
        let c = T::lit(2.0 / 3.0) * self.alpha.sin();
        (0..n)
            .map(|i| {
                let u = T::from_usize(i).unwrap() / n1;
                let t = t0 + (t1 - t0) * u;
                let h = (-c / (T::lit(2.0) * t).sin()).sqrt();
                Complex::new(sign * h * t.cos(), sign * h * t.sin())
            })
            .collect()
    }
}

/// Both branches of the arc, `n` points each.
pub fn arc_both_branches<T: Real>(alpha: T, r: T, n: usize) -> Result<Vec<Cplx<T>>> {
    let plus = HyperbolaArc::new(alpha, r, Branch::Plus)?;
    let mut pts = plus.sample(n);
    let mirrored: Vec<Cplx<T>> = pts.iter().map(|z| -*z).collect();
    pts.extend(mirrored);
    Ok(pts)
}

/// Hausdorff distance between two finite point sets: the max of the two
/// directed sup-min distances, exact over the samples.
pub fn hausdorff_distance<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> Result<T> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("Hausdorff distance of an empty set".into()));
    }
    let directed = |from: &[Cplx<T>], to: &[Cplx<T>]| -> T {
        from.par_chunks(1 << 10)
            .map(|chunk| {
                chunk
                    .iter()
                    .map(|a| {
                        to.iter()
                            .map(|b| (*a - *b).norm_sqr())
                            .fold(T::infinity(), T::min)
                    })
                    .fold(T::zero(), T::max)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(T::zero(), T::max)
    };
    Ok(directed(x, y).max(directed(y, x)).sqrt())
}

/// N*_{delta,R}: the window set magnified by 1/sqrt(|delta|).
pub fn rescaled_window<T: Real>(delta: Cplx<T>, r: T, depth: usize) -> Result<Vec<Cplx<T>>> {
    let w = cylinders::window_set(delta, r, depth)?;
    let scale = delta.norm().sqrt().recip();
    Ok(w.points.iter().map(|z| z * scale).collect())
}

/// One row of a convergence study.
#[derive(Clone, Copy, Debug)]
pub struct HausdorffReport<T> {
    pub delta: Cplx<T>,
    pub r: T,
    pub d_h: T,
    pub n_window: usize,
    pub n_arc: usize,
    pub depth: usize,
}

/// Number of arc samples per branch used in convergence studies.
pub const ARC_SAMPLES: usize = 512;

/// d_H(N*_{delta,R}, H*_{alpha,R}) along a decreasing t-schedule.
pub fn convergence_study<T: Real>(
    alpha: T,
    r: T,
    t_schedule: &[T],
    depth: usize,
) -> Result<Vec<HausdorffReport<T>>> {
    if t_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("t schedule must be strictly decreasing".into()));
    }
    let arc = arc_both_branches(alpha, r, ARC_SAMPLES)?;
    let mut out = Vec::with_capacity(t_schedule.len());
    for &t in t_schedule {
        let delta = Complex::new(alpha.cos(), alpha.sin()) * t;
        let window = rescaled_window(delta, r, depth)?;
        let d_h = hausdorff_distance(&window, &arc)?;
        out.push(HausdorffReport {
            delta,
            r,
            d_h,
            n_window: window.len(),
            n_arc: arc.len(),
            depth,
        });
    }
    Ok(out)
}

/// Result of the location band checks near +/-p.
#[derive(Clone, Debug)]
pub struct BandReport<T> {
    pub delta: Cplx<T>,
    pub depth: usize,
    pub n_points: usize,
    /// |Im z -+ Im p| >= |delta|^{17/16} on the respective slab.
    pub band_violations: usize,
    /// |Re z| >= Re p + |delta|^2.
    pub width_violations: usize,
    pub skipped: bool,
    pub note: String,
}

/// Checks the near-fixed-point location bands on a full-tree sample:
/// points with Re z beyond +-(Re p - |delta|^{15/16}) must have imaginary
/// part within |delta|^{17/16} of +-Im p, and all points satisfy
/// |Re z| < Re p + |delta|^2. Outside 0 < |delta| < 0.05 the check is
/// skipped with a diagnostic (the bands only hold for small delta).
pub fn band_check<T: Real>(delta: Cplx<T>, depth: usize) -> Result<BandReport<T>> {
    let t = delta.norm();
    if t.is_zero() || t >= T::lit(0.05) {
        return Ok(BandReport {
            delta,
            depth,
            n_points: 0,
            band_violations: 0,
            width_violations: 0,
            skipped: true,
            note: format!("|delta| = {t} outside the small-parameter regime (0, 0.05)"),
        });
    }
    let p = dynamics::fixed_point(delta)?.p;
    let slab = p.re - t.powf(T::lit(15.0 / 16.0));
    let band = t.powf(T::lit(17.0 / 16.0));
    let width = p.re + t * t;
    let sample = dynamics::julia_sample(delta, depth, SampleMode::FullTree, 0)?;
    let mut band_violations = 0;
    let mut width_violations = 0;
    for pt in &sample.points {
        let z = pt.z;
        if z.re > slab && (z.im - p.im).abs() >= band {
            band_violations += 1;
        }
        if z.re < -slab && (z.im + p.im).abs() >= band {
            band_violations += 1;
        }
        if z.re.abs() >= width {
            width_violations += 1;
        }
    }
    Ok(BandReport {
        delta,
        depth,
        n_points: sample.points.len(),
        band_violations,
        width_violations,
        skipped: false,
        note: String::new(),
    })
}
