//! Finite-depth topological pressure over preimage trees, the Bowen root
//! in tau, and depth extrapolation to the Hausdorff dimension.

use std::time::Instant;

use num_complex::Complex;

use crate::dynamics::{self, BranchWord, RayParameter};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::sum;

/// Hard depth cap: 2^26 leaves is the desk-scale performance ceiling.
pub const MAX_DEPTH: usize = 26;

/// Below this |delta| the loss of uniform expansion makes the required
/// depth unreachable; the module refuses instead of returning garbage.
pub const MIN_ABS_DELTA: f64 = 1e-5;

const ROOT_BRACKET: (f64, f64) = (0.5, 1.5);
const ROOT_TOL: f64 = 1e-14;

/// Base point for backward-orbit trees. The repelling fixed point p_delta
/// in general; at delta = 0 that point (p = 2) is postcritical and its
/// preimage tree runs through the critical point, so the other fixed
/// point, -1, is used there. The pressure limit does not depend on the
/// base point.
pub fn base_point<T: Real>(delta: Cplx<T>) -> Result<Cplx<T>> {
    if delta.re.is_zero() && delta.im.is_zero() {
        return Ok(Complex::new(-T::one(), T::zero()));
    }
    Ok(dynamics::fixed_point(delta)?.p)
}

/// Rejects parameters the pressure computation cannot resolve.
pub fn check_admissible<T: Real>(delta: Cplx<T>) -> Result<()> {
    dynamics::check_admissible(delta)?;
    let t = delta.norm();
    if !t.is_zero() && t < T::lit(MIN_ABS_DELTA) {
        return Err(Error::Inadmissible(format!(
            "|delta| = {t} is below the resolvable floor {MIN_ABS_DELTA}: the required tree depth grows like log(1/|delta|) and exceeds the depth cap"
        )));
    }
    Ok(())
}

/// Level-by-level preimage tree holding, at the current depth n, the 2^n
/// leaf points and per-leaf log|(f^n)'(z_w)|.
pub struct PreimageTree<T: Real> {
    delta: Cplx<T>,
    depth: usize,
    leaves: Vec<Cplx<T>>,
    log_deriv: Vec<T>,
}

impl<T: Real> PreimageTree<T> {
    pub fn new(delta: Cplx<T>) -> Result<Self> {
        check_admissible(delta)?;
        let base = base_point(delta)?;
        Ok(Self::with_base(delta, base))
    }

    /// Tree rooted at an arbitrary base point (used for base-point
    /// independence checks and pointwise transfer-operator evaluation).
    pub fn with_base(delta: Cplx<T>, base: Cplx<T>) -> Self {
        Self {
            delta,
            depth: 0,
            leaves: vec![base],
            log_deriv: vec![T::zero()],
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaves(&self) -> &[Cplx<T>] {
        &self.leaves
    }

    /// log|(f^depth)'(z_w)| per leaf, in leaf-index order.
    pub fn log_deriv(&self) -> &[T] {
        &self.log_deriv
    }

    /// Grow the tree by one level.
    pub fn extend(&mut self) -> Result<()> {
        if self.depth >= MAX_DEPTH {
            return Err(Error::Domain(format!(
                "tree depth cap {MAX_DEPTH} exceeded"
            )));
        }
        let two = Complex::new(T::lit(2.0), T::zero());
        let n = self.leaves.len();
        let mut z_next = vec![Cplx::<T>::new(T::zero(), T::zero()); 2 * n];
        let mut l_next = vec![T::zero(); 2 * n];
        let ln2 = T::lit(2.0).ln();
        let quarter = T::lit(0.25);
        for i in 0..n {
            let a = self.leaves[i] + two - self.delta;
            if a.re.is_zero() && a.im.is_zero() {
                return Err(Error::CriticalValue(format!(
                    "branch word {}",
                    BranchWord::from_index(i as u32, self.depth)
                )));
            }
            let s = dynamics::branch_sqrt(a);
            z_next[2 * i] = s;
            z_next[2 * i + 1] = -s;
            // log|2s| = log 2 + (1/4) log |a|^2
            let l = self.log_deriv[i] + ln2 + quarter * a.norm_sqr().ln();
            l_next[2 * i] = l;
            l_next[2 * i + 1] = l;
        }
        self.leaves = z_next;
        self.log_deriv = l_next;
        self.depth += 1;
        Ok(())
    }

    pub fn extend_to(&mut self, depth: usize) -> Result<()> {
        while self.depth < depth {
            self.extend()?;
        }
        Ok(())
    }
}

/// P_n(tau) from per-leaf log-derivatives: (1/n) log sum |(f^n)'|^{-tau}.
pub fn pressure_from_leaves<T: Real>(log_deriv: &[T], depth: usize, tau: T) -> T {
    let m = sum::max_map(log_deriv, |l| -tau * *l);
    let s = sum::sum_map(log_deriv, |l| (-tau * *l - m).exp());
    (m + s.ln()) / T::from_usize(depth).unwrap()
}

/// Finite-depth pressure P_n(tau) at the standard base point.
pub fn pressure_at<T: Real>(delta: Cplx<T>, tau: T, depth: usize) -> Result<T> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Domain(format!(
            "pressure depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    let mut tree = PreimageTree::new(delta)?;
    tree.extend_to(depth)?;
    Ok(pressure_from_leaves(tree.log_deriv(), depth, tau))
}

/// Same, from an explicit base point.
pub fn pressure_at_with_base<T: Real>(
    delta: Cplx<T>,
    base: Cplx<T>,
    tau: T,
    depth: usize,
) -> Result<T> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Domain(format!(
            "pressure depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    check_admissible(delta)?;
    let mut tree = PreimageTree::with_base(delta, base);
    tree.extend_to(depth)?;
    Ok(pressure_from_leaves(tree.log_deriv(), depth, tau))
}

/// Sampled pressure curve at one depth with its Bowen root.
#[derive(Clone, Debug)]
pub struct PressureCurve<T> {
    pub delta: Cplx<T>,
    pub depth: usize,
    pub samples: Vec<(T, T)>,
    pub root_estimate: T,
}

/// Sample P_n(tau) on a tau grid and solve for the root.
pub fn pressure_curve<T: Real>(
    delta: Cplx<T>,
    depth: usize,
    taus: &[T],
) -> Result<PressureCurve<T>> {
    let mut tree = PreimageTree::new(delta)?;
    tree.extend_to(depth)?;
    let samples = taus
        .iter()
        .map(|&tau| (tau, pressure_from_leaves(tree.log_deriv(), depth, tau)))
        .collect();
    let root_estimate = bowen_root(tree.log_deriv(), depth)?;
    Ok(PressureCurve {
        delta,
        depth,
        samples,
        root_estimate,
    })
}

/// Root of tau -> P_n(tau) in [0.5, 1.5] by bracketed secant (Illinois).
pub fn bowen_root<T: Real>(log_deriv: &[T], depth: usize) -> Result<T> {
    let (mut a, mut b) = (T::lit(ROOT_BRACKET.0), T::lit(ROOT_BRACKET.1));
    let mut fa = pressure_from_leaves(log_deriv, depth, a);
    let mut fb = pressure_from_leaves(log_deriv, depth, b);
    if !(fa > T::zero() && fb < T::zero()) {
        return Err(Error::NoBracket {
            lo: ROOT_BRACKET.0,
            hi: ROOT_BRACKET.1,
        });
    }
    let tol = T::lit(ROOT_TOL);
    // Illinois: secant step kept inside the bracket; the stale endpoint's
    // value is halved after two consecutive moves on the same side.
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a < tol {
            break;
        }
        let mut x = b - fb * (b - a) / (fb - fa);
        if !(x > a && x < b) {
            x = (a + b) * T::lit(0.5);
        }
        let fx = pressure_from_leaves(log_deriv, depth, x);
        if fx.is_zero() {
            return Ok(x);
        }
        if fx > T::zero() {
            a = x;
            fa = fx;
            if side == 1 {
                fb = fb * T::lit(0.5);
            }
            side = 1;
        } else {
            b = x;
            fb = fx;
            if side == -1 {
                fa = fa * T::lit(0.5);
            }
            side = -1;
        }
    }
    Ok((a + b) * T::lit(0.5))
}

/// Dimension estimate with its reported (never hidden) extrapolation error.
#[derive(Clone, Copy, Debug)]
pub struct DimensionEstimate<T> {
    pub delta: Cplx<T>,
    pub d_value: T,
    pub depth_used: usize,
    pub extrapolation_error: T,
    /// False when the depth cap was hit before the tolerance was met.
    pub converged: bool,
}

/// Polynomial extrapolation of root estimates to depth = infinity:
/// Neville's scheme in the variable 1/n evaluated at 0.
fn extrapolate_roots<T: Real>(depths: &[usize], roots: &[T]) -> T {
    let x: Vec<T> = depths
        .iter()
        .map(|&n| T::from_usize(n).unwrap().recip())
        .collect();
    let mut p = roots.to_vec();
    let k = p.len();
    for j in 1..k {
        for i in 0..k - j {
            p[i] = (x[i] * p[i + 1] - x[i + j] * p[i]) / (x[i] - x[i + j]);
        }
    }
    p[0]
}

/// Hausdorff dimension d(delta) via Bowen roots on a depth schedule
/// (8, 10, ..., max_depth) extrapolated in 1/n. The finite-depth roots
/// converge like d + c/n, which a low-order polynomial fit in 1/n removes;
/// the last four roots feed each extrapolant. Stops once consecutive
/// extrapolants differ by less than `target_tol`.
pub fn dimension_with_depth<T: Real>(
    delta: Cplx<T>,
    target_tol: T,
    max_depth: usize,
) -> Result<DimensionEstimate<T>> {
    if target_tol < T::lit(1e-5) {
        return Err(Error::Domain(format!(
            "dimension tolerance must be >= 1e-5, got {target_tol}"
        )));
    }
    if max_depth > MAX_DEPTH || max_depth < 8 {
        return Err(Error::Domain(format!(
            "dimension depth cap must lie in 8..={MAX_DEPTH}, got {max_depth}"
        )));
    }
    let mut tree = PreimageTree::new(delta)?;
    let mut depths: Vec<usize> = Vec::new();
    let mut roots: Vec<T> = Vec::new();
    let mut extrapolants: Vec<T> = Vec::new();
    let mut n = 8;
    loop {
        tree.extend_to(n)?;
        match bowen_root(tree.log_deriv(), n) {
            Ok(root) => {
                depths.push(n);
                roots.push(root);
            }
            // Very close to the parameter boundary a shallow tree can fail
            // to bracket the root even though deeper trees do; skip the
            // depth unless even the deepest one fails.
            Err(Error::NoBracket { .. }) if n < max_depth && roots.is_empty() => {}
            Err(e) => return Err(e),
        }
        if roots.len() >= 2 {
            let w = roots.len().min(4);
            let lo = roots.len() - w;
            extrapolants.push(extrapolate_roots(&depths[lo..], &roots[lo..]));
        }
        if extrapolants.len() >= 2 {
            let err = (extrapolants[extrapolants.len() - 1]
                - extrapolants[extrapolants.len() - 2])
                .abs();
            if err < target_tol {
                return Ok(DimensionEstimate {
                    delta,
                    d_value: *extrapolants.last().unwrap(),
                    depth_used: n,
                    extrapolation_error: err,
                    converged: true,
                });
            }
        }
        if n + 2 > max_depth {
            break;
        }
        n += 2;
    }
    // Depth cap reached: report the best estimate with its error.
    let (d_value, extrapolation_error) = match extrapolants.len() {
        0 => (*roots.last().unwrap(), T::infinity()),
        1 => (extrapolants[0], (extrapolants[0] - *roots.last().unwrap()).abs()),
        k => (
            extrapolants[k - 1],
            (extrapolants[k - 1] - extrapolants[k - 2]).abs(),
        ),
    };
    Ok(DimensionEstimate {
        delta,
        d_value,
        depth_used: n,
        extrapolation_error,
        converged: false,
    })
}

/// `dimension_with_depth` with the default cap of 24.
pub fn dimension<T: Real>(delta: Cplx<T>, target_tol: T) -> Result<DimensionEstimate<T>> {
    dimension_with_depth(delta, target_tol, 24)
}

/// One row of a dimension scan.
pub struct ScanRow<T> {
    pub alpha: T,
    pub t: T,
    pub result: Result<DimensionEstimate<T>>,
    pub seconds: f64,
}

/// Dimension along a list of rays; failures are recorded per row and the
/// scan continues.
pub fn dimension_scan<T: Real>(rays: &[RayParameter<T>], tol: T) -> Vec<ScanRow<T>> {
    rays.iter()
        .map(|ray| {
            let start = Instant::now();
            let result = dimension(ray.delta(), tol);
            ScanRow {
                alpha: ray.alpha(),
                t: ray.t(),
                result,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}
