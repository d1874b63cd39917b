//! Combinatorial skeleton of the Julia set: the cylinder families
//! C^{+2}_n, C^{-2}_n, C^{0+/-}_n, the window sets N_{delta,R}, and the
//! itinerary classification of sampled points.
//!
//! A depth-k branch word read backwards is the forward itinerary of the
//! point (sequence of half-planes visited by z, f(z), f^2(z), ...); the
//! families are cut out by itinerary prefixes:
//!   C^{+2}_n : + repeated n+1 times, then -
//!   C^{-2}_n : -, + repeated n times, then -
//!   C^{0+}_0 : +, +            (the quadrant set J_{++})
//!   C^{0+}_n : +, -, + repeated n-1 times, then -   (n >= 1)
//! The -/0- families are the mirrors -C^{+2}_n and -C^{0+}_n. Since
//! f(-z) = f(z), mirroring flips only the first itinerary symbol:
//!   C^{0-}_0 : -, +            (the quadrant set J_{-+})
//!   C^{0-}_n : -, -, + repeated n-1 times, then -   (n >= 1)

use crate::dynamics::{self, BranchWord, SampleMode, Sign};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Sentinel index for the fixed points +/-p, which belong to no cylinder.
pub const SENTINEL_INDEX: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Plus2,
    Minus2,
    ZeroPlus,
    ZeroMinus,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Plus2 => "plus2",
            Family::Minus2 => "minus2",
            Family::ZeroPlus => "zero_plus",
            Family::ZeroMinus => "zero_minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CylinderId {
    pub family: Family,
    pub index: u32,
}

impl CylinderId {
    pub fn new(family: Family, index: u32) -> Self {
        Self { family, index }
    }

    pub fn is_sentinel(&self) -> bool {
        self.index == SENTINEL_INDEX
    }
}

/// A cylinder realized as the depth-`depth` sample points whose itinerary
/// matches the family pattern.
#[derive(Clone, Debug)]
pub struct CylinderSample<T> {
    pub id: CylinderId,
    pub points: Vec<(BranchWord, Cplx<T>)>,
    pub diam_estimate: T,
}

impl<T: Real> CylinderSample<T> {
    pub fn min_abs(&self) -> T {
        self.points
            .iter()
            .map(|(_, z)| z.norm())
            .fold(T::infinity(), T::min)
    }

    pub fn max_abs(&self) -> T {
        self.points
            .iter()
            .map(|(_, z)| z.norm())
            .fold(T::zero(), T::max)
    }

    pub const CSV_HEADER: &'static str = "family,n,count,diam,min_abs,max_abs";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.id.family.as_str(),
            self.id.index,
            self.points.len(),
            self.diam_estimate.to_f64().unwrap_or(f64::NAN),
            self.min_abs().to_f64().unwrap_or(f64::NAN),
            self.max_abs().to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Itinerary pattern of a family as (first sign, second sign, run sign,
/// closing sign); see the module header. Returns the required pattern
/// length for index n.
fn pattern_len(id: CylinderId) -> usize {
    match id.family {
        Family::Plus2 | Family::Minus2 => id.index as usize + 2,
        Family::ZeroPlus | Family::ZeroMinus => {
            if id.index == 0 {
                2
            } else {
                id.index as usize + 2
            }
        }
    }
}

/// Does the forward itinerary (it(0), it(1), ...) match the family pattern?
fn matches_pattern(id: CylinderId, it: impl Fn(usize) -> Sign) -> bool {
    let n = id.index as usize;
    match id.family {
        Family::Plus2 => {
            (0..=n).all(|k| it(k) == Sign::Plus) && it(n + 1) == Sign::Minus
        }
        Family::Minus2 => {
            it(0) == Sign::Minus
                && (1..=n).all(|k| it(k) == Sign::Plus)
                && it(n + 1) == Sign::Minus
        }
        Family::ZeroPlus => {
            if n == 0 {
                it(0) == Sign::Plus && it(1) == Sign::Plus
            } else {
                it(0) == Sign::Plus
                    && it(1) == Sign::Minus
                    && (2..=n).all(|k| it(k) == Sign::Plus)
                    && it(n + 1) == Sign::Minus
            }
        }
        Family::ZeroMinus => {
            if n == 0 {
                it(0) == Sign::Minus && it(1) == Sign::Plus
            } else {
                it(0) == Sign::Minus
                    && it(1) == Sign::Minus
                    && (2..=n).all(|k| it(k) == Sign::Plus)
                    && it(n + 1) == Sign::Minus
            }
        }
    }
}

/// Does a branch word address a point of the cylinder `id`? The forward
/// itinerary is the word read backwards.
pub fn word_matches(id: CylinderId, word: &BranchWord) -> bool {
    matches_pattern(id, |k| word.sign_from_end(k))
}

/// Sample of the cylinder `id` from the depth-`depth` preimage tree.
/// Suggested depth: id.index + 10 (diameters decay like |lambda|^{-n/2},
/// so ten extra levels give about three decimal digits).
pub fn cylinder_points<T: Real>(
    delta: Cplx<T>,
    id: CylinderId,
    depth: usize,
) -> Result<CylinderSample<T>> {
    if id.is_sentinel() {
        return Err(Error::Domain("sentinel cylinder id has no sample".into()));
    }
    let need = pattern_len(id);
    if depth < need {
        return Err(Error::Empty(format!(
            "depth {depth} too small for {} index {} (needs >= {need})",
            id.family.as_str(),
            id.index
        )));
    }
    let sample = dynamics::julia_sample(delta, depth, SampleMode::FullTree, 0)?;
    let points: Vec<(BranchWord, Cplx<T>)> = sample
        .points
        .iter()
        .filter(|pt| matches_pattern(id, |k| pt.word.sign_from_end(k)))
        .map(|pt| (pt.word, pt.z))
        .collect();
    if points.is_empty() {
        return Err(Error::Empty(format!(
            "no depth-{depth} sample point matches {} index {}",
            id.family.as_str(),
            id.index
        )));
    }
    let mut diam = T::zero();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            diam = diam.max((points[i].1 - points[j].1).norm());
        }
    }
    Ok(CylinderSample {
        id,
        points,
        diam_estimate: diam,
    })
}

/// The window N_{delta,R}: sampled Julia points with |Re z| <= R sqrt(|delta|).
#[derive(Clone, Debug)]
pub struct WindowSet<T> {
    pub points: Vec<Cplx<T>>,
    /// Set when fewer than 50 points survive the filter (depth too shallow
    /// for the requested delta).
    pub sparse: bool,
}

pub fn window_set<T: Real>(delta: Cplx<T>, r: T, depth: usize) -> Result<WindowSet<T>> {
    if delta.re.is_zero() && delta.im.is_zero() {
        return Err(Error::Domain("window set requires delta != 0".into()));
    }
    if r < T::one() {
        return Err(Error::Domain(format!("window radius must be >= 1, got {r}")));
    }
    let cut = r * delta.norm().sqrt();
    let sample = dynamics::julia_sample(delta, depth, SampleMode::FullTree, 0)?;
    let points: Vec<Cplx<T>> = sample
        .points
        .iter()
        .filter(|pt| pt.z.re.abs() <= cut)
        .map(|pt| pt.z)
        .collect();
    let sparse = points.len() < 50;
    Ok(WindowSet { points, sparse })
}

const ITINERARY_CAP: usize = 64;

/// Cylinder index of a Julia-set point from its forward itinerary: the
/// +/-2 family index for points that stay on one side before crossing, the
/// zero-family index for points that cross immediately. The fixed points
/// +/-p (which belong to no cylinder) get the sentinel index.
pub fn cylinder_measure_index<T: Real>(delta: Cplx<T>, z: Cplx<T>) -> Result<CylinderId> {
    let p = dynamics::fixed_point(delta)?.p;
    let tol = T::lit(1e-12) * (T::one() + p.norm());
    if (z - p).norm() < tol {
        return Ok(CylinderId::new(Family::Plus2, SENTINEL_INDEX));
    }
    if (z + p).norm() < tol {
        return Ok(CylinderId::new(Family::Minus2, SENTINEL_INDEX));
    }
    // Forward itinerary of z. Since f(-z) = f(z), the itinerary of the
    // mirror point -z differs only in the first symbol; classify the
    // plus-side representative and mirror the family tag afterwards.
    let mut it = Vec::with_capacity(ITINERARY_CAP);
    let mut w = z;
    for _ in 0..ITINERARY_CAP {
        it.push(Sign::of(w));
        w = dynamics::apply(delta, w, 1);
    }
    let minus_side = it[0] == Sign::Minus;
    it[0] = Sign::Plus;
    let id = if it[1] == Sign::Plus {
        // Stays on the plus side: a +2-family point; the index counts the
        // stay before the first crossing (pattern +^(n+1), -).
        let run = it.iter().take_while(|&&s| s == Sign::Plus).count();
        if run >= ITINERARY_CAP {
            return Err(Error::NonConvergence(format!(
                "no itinerary crossing within {ITINERARY_CAP} steps"
            )));
        }
        CylinderId::new(Family::Plus2, (run - 1) as u32)
    } else {
        // Immediate crossing: a zero-family point with pattern
        // +, -, +^(n-1), -.
        let run = it[2..].iter().take_while(|&&s| s == Sign::Plus).count();
        if 2 + run >= ITINERARY_CAP {
            return Err(Error::NonConvergence(format!(
                "no zero-family closing symbol within {ITINERARY_CAP} steps"
            )));
        }
        CylinderId::new(Family::ZeroPlus, (run + 1) as u32)
    };
    if minus_side {
        let family = match id.family {
            Family::Plus2 => Family::Minus2,
            _ => Family::ZeroMinus,
        };
        Ok(CylinderId::new(family, id.index))
    } else {
        Ok(id)
    }
}
