//! Discretized conformal measure (exponent d) and invariant measure
//! mu = h * omega via transfer-operator iteration, both carried as
//! weighted point clouds of total mass 4 on preimage-tree leaves.

use crate::error::{Error, Result};
use crate::pressure::PreimageTree;
use crate::scalar::{Cplx, Real};
use crate::sum;

/// Mass convention: the Julia set carries total measure 4.
pub const TOTAL_MASS: f64 = 4.0;

/// Relative sup-norm tolerance for the density iteration. The density is
/// unbounded toward the endpoints of the spectrum of |z| values, so the
/// stopping rule is relative, not absolute.
pub const DENSITY_SUP_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    Conformal,
    Invariant,
}

/// Weighted point cloud discretizing omega_delta or mu_delta.
#[derive(Clone, Debug)]
pub struct MeasureAtoms<T> {
    pub delta: Cplx<T>,
    pub exponent: T,
    pub depth: usize,
    pub kind: MeasureKind,
    pub z: Vec<Cplx<T>>,
    pub weight: Vec<T>,
}

impl<T: Real> MeasureAtoms<T> {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn total_mass(&self) -> T {
        sum::sum(&self.weight)
    }

    /// CSV dump: re,im,weight,kind.
    pub fn to_csv(&self) -> String {
        let kind = match self.kind {
            MeasureKind::Conformal => "conformal",
            MeasureKind::Invariant => "invariant",
        };
        let mut s = String::from("re,im,weight,kind\n");
        for (z, w) in self.z.iter().zip(&self.weight) {
            s.push_str(&format!(
                "{},{},{},{}\n",
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
                w.to_f64().unwrap_or(f64::NAN),
                kind
            ));
        }
        s
    }
}

fn normalize_to_total_mass<T: Real>(weight: &mut [T]) {
    let total = sum::sum(weight);
    let scale = T::lit(TOTAL_MASS) / total;
    for w in weight.iter_mut() {
        *w = *w * scale;
    }
}

/// Conformal-measure discretization: one atom per depth-n preimage z_w
/// with weight proportional to |(f^n)'(z_w)|^{-d}, normalized to mass 4.
/// `d` must come from the pressure module (the weights only approximate a
/// conformal measure when P_n(d) is small).
pub fn conformal_atoms<T: Real>(delta: Cplx<T>, d: T, depth: usize) -> Result<MeasureAtoms<T>> {
    let mut tree = PreimageTree::new(delta)?;
    tree.extend_to(depth)?;
    let log_deriv = tree.log_deriv();
    // Stable exponentiation: shift by the max exponent before normalizing.
    let m = sum::max_map(log_deriv, |l| -d * *l);
    let mut weight: Vec<T> = log_deriv.iter().map(|l| (-d * *l - m).exp()).collect();
    normalize_to_total_mass(&mut weight);
    Ok(MeasureAtoms {
        delta,
        exponent: d,
        depth,
        kind: MeasureKind::Conformal,
        z: tree.leaves().to_vec(),
        weight,
    })
}

/// Diagnostics of the transfer-operator density iteration.
#[derive(Clone, Copy, Debug)]
pub struct DensityInfo<T> {
    /// Iterations actually performed.
    pub iterations: usize,
    /// Relative sup-norm change between the last two iterates.
    pub sup_change: T,
}

/// All transfer-operator iterates L^1(1)(z), ..., L^max_m(1)(z) at one
/// point, from its local preimage subtree (depth-k preimages of z are
/// exactly the depth-(n+k) tree leaves below the atom z, so this matches
/// the global-tree evaluation while keeping memory at O(2^max_m)).
fn density_iterates<T: Real>(delta: Cplx<T>, d: T, z: Cplx<T>, max_m: usize) -> Vec<T> {
    let two = num_complex::Complex::new(T::lit(2.0), T::zero());
    let ln2 = T::lit(2.0).ln();
    let quarter = T::lit(0.25);
    let mut zs = vec![z];
    let mut ls = vec![T::zero()];
    let mut out = Vec::with_capacity(max_m);
    for _ in 0..max_m {
        let mut z_next = Vec::with_capacity(2 * zs.len());
        let mut l_next = Vec::with_capacity(2 * zs.len());
        for (zz, ll) in zs.iter().zip(&ls) {
            let a = *zz + two - delta;
            let s = crate::dynamics::branch_sqrt(a);
            let l = *ll + ln2 + quarter * a.norm_sqr().ln();
            z_next.push(s);
            z_next.push(-s);
            l_next.push(l);
            l_next.push(l);
        }
        zs = z_next;
        ls = l_next;
        out.push(sum::kahan(ls.iter().map(|l| (-d * *l).exp())));
    }
    out
}

/// Invariant-measure atoms: evaluates h ~ L^m(1) at each conformal atom
/// via per-atom preimage subtrees, reweights by h, and renormalizes to
/// mass 4. The iteration count is the smallest m whose relative sup-change
/// over all atoms drops below `DENSITY_SUP_TOL`; errors if `max_m`
/// iterations do not get there.
pub fn invariant_density<T: Real>(
    delta: Cplx<T>,
    d: T,
    atoms: &MeasureAtoms<T>,
    max_m: usize,
) -> Result<(MeasureAtoms<T>, DensityInfo<T>)> {
    use rayon::prelude::*;

    if max_m < 1 {
        return Err(Error::Domain("density iteration count must be >= 1".into()));
    }
    if atoms.kind != MeasureKind::Conformal {
        return Err(Error::Domain(
            "invariant_density expects conformal atoms".into(),
        ));
    }
    if atoms.exponent != d {
        return Err(Error::Domain(
            "exponent mismatch between atoms and requested density".into(),
        ));
    }
    crate::pressure::check_admissible(delta)?;
    let n_atoms = atoms.len();
    let iterates: Vec<Vec<T>> = atoms
        .z
        .par_iter()
        .map(|&z| density_iterates(delta, d, z, max_m))
        .collect();
    // Relative sup-change per iteration over all atoms, after scaling each
    // iterate to unit mean (power iteration): the raw iterates carry a
    // constant factor e^{m P(d)} per step that the final renormalization
    // removes anyway, and comparing raw values would stall at |P(d)| when
    // the requested exponent is sharper than the finite-depth root.
    let mean = |m: usize| -> T {
        if m == 0 {
            return T::one();
        }
        sum::kahan((0..n_atoms).map(|j| iterates[j][m - 1])) / T::from_usize(n_atoms).unwrap()
    };
    let mut chosen = None;
    let mut last_change = T::infinity();
    let tol = T::lit(DENSITY_SUP_TOL);
    for m in 1..=max_m {
        let s_curr = mean(m);
        let s_prev = mean(m - 1);
        let change = (0..n_atoms)
            .map(|j| {
                let curr = iterates[j][m - 1] / s_curr;
                let prev = if m == 1 { T::one() } else { iterates[j][m - 2] } / s_prev;
                ((curr - prev) / curr).abs()
            })
            .fold(T::zero(), T::max);
        last_change = change;
        if change < tol {
            chosen = Some((m, change));
            break;
        }
    }
    let (m_used, sup_change) = chosen.ok_or_else(|| {
        Error::NonConvergence(format!(
            "density iteration: relative sup-change {last_change} after {max_m} iterations (tolerance {DENSITY_SUP_TOL})"
        ))
    })?;
    let mut weight: Vec<T> = atoms
        .weight
        .iter()
        .enumerate()
        .map(|(j, w)| *w * iterates[j][m_used - 1])
        .collect();
    normalize_to_total_mass(&mut weight);
    Ok((
        MeasureAtoms {
            delta,
            exponent: d,
            depth: atoms.depth,
            kind: MeasureKind::Invariant,
            z: atoms.z.clone(),
            weight,
        },
        info_from(m_used, sup_change),
    ))
}

fn info_from<T: Real>(iterations: usize, sup_change: T) -> DensityInfo<T> {
    DensityInfo {
        iterations,
        sup_change,
    }
}

/// Pointwise L^m(1)(z): the m-th transfer-operator iterate of the constant
/// function 1, evaluated from z's own preimage tree.
pub fn density_at<T: Real>(delta: Cplx<T>, d: T, z: Cplx<T>, m: usize) -> Result<T> {
    if m == 0 {
        return Ok(T::one());
    }
    let mut tree = PreimageTree::with_base(delta, z);
    tree.extend_to(m)?;
    Ok(sum::sum_map(tree.log_deriv(), |l| (-d * *l).exp()))
}

/// Rescaled measure: atoms at z / sqrt(|delta|) with weights multiplied by
/// |delta|^{-d/2}. Pure bookkeeping, no renormalization.
#[derive(Clone, Debug)]
pub struct RescaledMeasure<T> {
    pub delta: Cplx<T>,
    pub exponent: T,
    pub depth: usize,
    pub kind: MeasureKind,
    pub z: Vec<Cplx<T>>,
    pub weight: Vec<T>,
}

pub fn rescale_measure<T: Real>(atoms: &MeasureAtoms<T>) -> Result<RescaledMeasure<T>> {
    let t = atoms.delta.norm();
    if t.is_zero() {
        return Err(Error::Domain("rescaling requires delta != 0".into()));
    }
    let scale = t.sqrt().recip();
    let mass_scale = t.powf(-atoms.exponent * T::lit(0.5));
    Ok(RescaledMeasure {
        delta: atoms.delta,
        exponent: atoms.exponent,
        depth: atoms.depth,
        kind: atoms.kind,
        z: atoms.z.iter().map(|z| z * scale).collect(),
        weight: atoms.weight.iter().map(|w| *w * mass_scale).collect(),
    })
}

/// Integral of `f` against the atomic measure: compensated summation in a
/// fixed order. Aborts on NaN, naming the offending atom.
pub fn integrate<T, F>(atoms: &MeasureAtoms<T>, f: F) -> Result<T>
where
    T: Real,
    F: Fn(Cplx<T>) -> T + Sync + Send,
{
    let idx: Vec<usize> = (0..atoms.len()).collect();
    let total = sum::sum_map(&idx, |&i| atoms.weight[i] * f(atoms.z[i]));
    if total.is_nan() {
        for i in 0..atoms.len() {
            let v = atoms.weight[i] * f(atoms.z[i]);
            if v.is_nan() {
                return Err(Error::NotFinite(format!(
                    "integrand is NaN at atom {i}, z = {}",
                    atoms.z[i]
                )));
            }
        }
        return Err(Error::NotFinite("integral is NaN".into()));
    }
    Ok(total)
}
