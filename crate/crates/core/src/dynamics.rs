//! The quadratic family f_delta(z) = z^2 - 2 + delta: fixed points,
//! multipliers, orbit derivatives, inverse branches, escape geometry, and
//! inverse-iteration sampling of the Julia set.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Orbits are declared escaping once they leave this radius; far beyond any
/// bound the library relies on, it only guards against NaN propagation.
pub const ESCAPE_RADIUS: f64 = 1e8;

/// Square root with Re > 0; on the negative real axis the root with
/// positive imaginary part is taken. This is the branch convention used by
/// every module; implemented once here.
pub fn branch_sqrt<T: Real>(z: Cplx<T>) -> Cplx<T> {
    if z.im.is_zero() {
        // Handle the axis explicitly: the principal sqrt of (-x, -0.0)
        // would land on the wrong side of the cut.
        if z.re < T::zero() {
            return Complex::new(T::zero(), (-z.re).sqrt());
        }
        return Complex::new(z.re.sqrt(), T::zero());
    }
    let w = z.sqrt();
    if w.re < T::zero() {
        -w
    } else {
        w
    }
}

/// delta written as t * e^{i alpha}; the coordinate used throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayParameter<T> {
    alpha: T,
    t: T,
}

impl<T: Real> RayParameter<T> {
    /// alpha must lie strictly in (0, 2 pi): the positive real ray is
    /// excluded. t = 0 encodes the Chebyshev parameter delta = 0.
    pub fn new(alpha: T, t: T) -> Result<Self> {
        let two_pi = T::PI() + T::PI();
        if !(alpha > T::zero() && alpha < two_pi) {
            return Err(Error::Domain(format!(
                "ray angle must lie in (0, 2pi), got {alpha}"
            )));
        }
        if !(t >= T::zero()) {
            return Err(Error::Domain(format!("ray magnitude must be >= 0, got {t}")));
        }
        Ok(Self { alpha, t })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn t(&self) -> T {
        self.t
    }

    /// The unit direction v = e^{i alpha}.
    pub fn direction(&self) -> Cplx<T> {
        Complex::new(self.alpha.cos(), self.alpha.sin())
    }

    pub fn delta(&self) -> Cplx<T> {
        self.direction() * self.t
    }
}

/// Repelling fixed point p and its multiplier lambda = 2p.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointData<T> {
    pub p: Cplx<T>,
    pub lambda: Cplx<T>,
}

/// p = 1/2 + (3/2) sqrt(1 - 4 delta / 9), branch per `branch_sqrt`.
pub fn fixed_point<T: Real>(delta: Cplx<T>) -> Result<FixedPointData<T>> {
    if delta.norm() >= T::lit(2.25) {
        return Err(Error::Domain(format!(
            "fixed point convention requires |delta| < 9/4, got |delta| = {}",
            delta.norm()
        )));
    }
    let s = branch_sqrt(Complex::new(T::one(), T::zero()) - delta * T::lit(4.0 / 9.0));
    let p = s * T::lit(1.5) + T::lit(0.5);
    Ok(FixedPointData { p, lambda: p + p })
}

/// f_delta^n(z); n = 0 is the identity. Short-circuits once the orbit
/// leaves `ESCAPE_RADIUS`.
pub fn apply<T: Real>(delta: Cplx<T>, z: Cplx<T>, n: usize) -> Cplx<T> {
    let c = delta - T::lit(2.0);
    let r2 = T::lit(ESCAPE_RADIUS * ESCAPE_RADIUS);
    let mut z = z;
    for _ in 0..n {
        if z.norm_sqr() > r2 {
            return z;
        }
        z = z * z + c;
    }
    z
}

/// (f_delta^n)'(z) = prod_{k=0}^{n-1} 2 f_delta^k(z). If the orbit escapes
/// before the product is complete, the remaining factors are astronomically
/// large and infinity is returned.
pub fn orbit_derivative<T: Real>(delta: Cplx<T>, z: Cplx<T>, n: usize) -> Cplx<T> {
    let c = delta - T::lit(2.0);
    let r2 = T::lit(ESCAPE_RADIUS * ESCAPE_RADIUS);
    let mut z = z;
    let mut acc = Cplx::<T>::new(T::one(), T::zero());
    for k in 0..n {
        acc *= z + z;
        if k + 1 < n {
            z = z * z + c;
            if z.norm_sqr() > r2 {
                return Complex::new(T::infinity(), T::zero());
            }
        }
    }
    acc
}

/// Branch label for inverse iteration: the half-plane of the preimage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of<T: Real>(z: Cplx<T>) -> Sign {
        if z.re >= T::zero() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The preimage of w under f_delta in the chosen half-plane:
/// +/- sqrt(w + 2 - delta) with the shared branch convention.
pub fn inverse_branch<T: Real>(delta: Cplx<T>, w: Cplx<T>, sign: Sign) -> Result<Cplx<T>> {
    let a = w + Complex::new(T::lit(2.0), T::zero()) - delta;
    if a.re.is_zero() && a.im.is_zero() {
        return Err(Error::CriticalValue(format!(
            "w = {w} is the critical value; its only preimage is the critical point 0"
        )));
    }
    let r = branch_sqrt(a);
    Ok(match sign {
        Sign::Plus => r,
        Sign::Minus => -r,
    })
}

/// Ellipse with foci at -2 and 2, parameterized by r > 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse<T> {
    r: T,
}

impl<T: Real> Ellipse<T> {
    pub fn new(r: T) -> Result<Self> {
        if !(r > T::one()) {
            return Err(Error::Domain(format!("ellipse parameter must be > 1, got {r}")));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn semi_major(&self) -> T {
        self.r + self.r.recip()
    }

    pub fn semi_minor(&self) -> T {
        self.r - self.r.recip()
    }

    pub fn contains(&self, z: Cplx<T>) -> bool {
        let a = self.semi_major();
        let b = self.semi_minor();
        let x = z.re / a;
        let y = z.im / b;
        x * x + y * y <= T::one()
    }
}

/// The containment ellipse E_{1 + sqrt(|delta|)} of the Julia set (delta != 0).
pub fn julia_bound<T: Real>(delta: Cplx<T>) -> Result<Ellipse<T>> {
    if delta.re.is_zero() && delta.im.is_zero() {
        return Err(Error::Domain(
            "containment ellipse degenerates to [-2, 2] at delta = 0".into(),
        ));
    }
    Ellipse::new(T::one() + delta.norm().sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeStatus {
    InsideBound,
    Escaped,
}

/// Escape test against the containment ellipse: points outside it iterate
/// to infinity.
pub fn escape_test<T: Real>(delta: Cplx<T>, z: Cplx<T>) -> Result<EscapeStatus> {
    let e = julia_bound(delta)?;
    Ok(if e.contains(z) {
        EscapeStatus::InsideBound
    } else {
        EscapeStatus::Escaped
    })
}

/// Finite word over {+,-} addressing a composition of inverse branches.
/// sign(1) is the first branch applied to the base point; the forward
/// itinerary of the resulting point reads the word backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BranchWord {
    bits: u32,
    len: u8,
}

impl BranchWord {
    pub const MAX_LEN: usize = 32;

    pub fn empty() -> Self {
        Self { bits: 0, len: 0 }
    }

    /// Word from a leaf index at the given depth: bit (len - j) of the
    /// index holds sign j, 0 meaning +.
    pub fn from_index(index: u32, len: usize) -> Self {
        assert!(len <= Self::MAX_LEN);
        Self {
            bits: index,
            len: len as u8,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, s: Sign) {
        assert!((self.len as usize) < Self::MAX_LEN, "branch word overflow");
        self.bits = (self.bits << 1) | matches!(s, Sign::Minus) as u32;
        self.len += 1;
    }

    /// Sign at position j, 1-based from the first branch applied.
    pub fn sign(&self, j: usize) -> Sign {
        assert!(j >= 1 && j <= self.len());
        if (self.bits >> (self.len() - j)) & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Sign counted from the end: `sign_from_end(0)` is the last branch
    /// applied, i.e. the first symbol of the forward itinerary.
    pub fn sign_from_end(&self, i: usize) -> Sign {
        self.sign(self.len() - i)
    }

    pub fn index(&self) -> u32 {
        self.bits
    }
}

impl fmt::Display for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.len() {
            write!(f, "{}", self.sign(j))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    FullTree,
    RandomWalk,
}

/// One sampled Julia-set point with its branch address. Coinciding points
/// (the two-to-one collapse above preimages of 0 at delta = 0) are merged
/// and counted by `multiplicity`.
#[derive(Clone, Copy, Debug)]
pub struct SamplePoint<T> {
    pub word: BranchWord,
    pub z: Cplx<T>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct JuliaSample<T> {
    pub delta: Cplx<T>,
    pub depth: usize,
    pub points: Vec<SamplePoint<T>>,
}

/// Rejects parameters the dimension theory does not cover: the positive
/// real ray, |delta| >= 9/4, and parameters whose critical orbit stays
/// bounded for 1000 iterates (a proxy for membership in the Mandelbrot
/// set, flagged as such, not asserted as equivalent).
pub fn check_admissible<T: Real>(delta: Cplx<T>) -> Result<()> {
    let t = delta.norm();
    if t >= T::lit(2.25) {
        return Err(Error::Inadmissible(format!("|delta| = {t} is too large")));
    }
    if t.is_zero() {
        return Ok(());
    }
    if delta.im.is_zero() && delta.re > T::zero() {
        return Err(Error::Inadmissible(
            "the positive real ray lies inside the Mandelbrot set".into(),
        ));
    }
    // Critical orbit escape proxy.
    let c = delta - T::lit(2.0);
    let bound = T::lit(2.0) + t;
    let mut z = Cplx::<T>::new(T::zero(), T::zero());
    for _ in 0..1000 {
        z = z * z + c;
        if z.norm() > bound {
            return Ok(());
        }
    }
    Err(Error::Inadmissible(
        "critical orbit stays bounded for 1000 iterates; delta appears to lie inside the Mandelbrot set"
            .into(),
    ))
}

/// Inverse-iteration sample of J_delta from the base point p_delta.
///
/// `FullTree` enumerates all 2^depth branch words (depth <= 24);
/// `RandomWalk` draws 2^min(depth, 20) points along a random backward
/// orbit, reproducible from `seed`.
pub fn julia_sample<T: Real>(
    delta: Cplx<T>,
    depth: usize,
    mode: SampleMode,
    seed: u64,
) -> Result<JuliaSample<T>> {
    if depth == 0 {
        return Err(Error::Domain("sample depth must be >= 1".into()));
    }
    check_admissible(delta)?;
    let base = fixed_point(delta)?.p;
    match mode {
        SampleMode::FullTree => {
            if depth > 24 {
                return Err(Error::Domain(format!(
                    "full-tree depth {depth} exceeds the cap 24"
                )));
            }
            let two = Complex::new(T::lit(2.0), T::zero());
            let mut level = vec![base];
            let mut hit_zero = false;
            for _ in 0..depth {
                let mut next = vec![Cplx::<T>::new(T::zero(), T::zero()); 2 * level.len()];
                for (i, &z) in level.iter().enumerate() {
                    let a = z + two - delta;
                    if a.re.is_zero() && a.im.is_zero() {
                        hit_zero = true;
                        // Both children are the critical point; recorded as
                        // multiplicity, not an error.
                        continue;
                    }
                    let s = branch_sqrt(a);
                    next[2 * i] = s;
                    next[2 * i + 1] = -s;
                }
                level = next;
            }
            let points = if hit_zero {
                merge_duplicates(&level, depth)
            } else {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, &z)| SamplePoint {
                        word: BranchWord::from_index(i as u32, depth),
                        z,
                        multiplicity: 1,
                    })
                    .collect()
            };
            Ok(JuliaSample {
                delta,
                depth,
                points,
            })
        }
        SampleMode::RandomWalk => {
            let count = 1usize << depth.min(20);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut z = base;
            let mut word = BranchWord::empty();
            let mut points = Vec::with_capacity(count);
            let burn_in = 64;
            for step in 0..burn_in + count {
                let sign = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
                let a = z + Complex::new(T::lit(2.0), T::zero()) - delta;
                z = if a.re.is_zero() && a.im.is_zero() {
                    Cplx::new(T::zero(), T::zero())
                } else {
                    let r = branch_sqrt(a);
                    if matches!(sign, Sign::Plus) {
                        r
                    } else {
                        -r
                    }
                };
                if word.len() == BranchWord::MAX_LEN {
                    word = BranchWord::empty();
                }
                word.push(sign);
                if step >= burn_in {
                    points.push(SamplePoint {
                        word,
                        z,
                        multiplicity: 1,
                    });
                }
            }
            Ok(JuliaSample {
                delta,
                depth,
                points,
            })
        }
    }
}

fn merge_duplicates<T: Real>(leaves: &[Cplx<T>], depth: usize) -> Vec<SamplePoint<T>> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    let mut out: Vec<SamplePoint<T>> = Vec::new();
    for (i, &z) in leaves.iter().enumerate() {
        let key = (
            z.re.to_f64().unwrap_or(f64::NAN).to_bits(),
            z.im.to_f64().unwrap_or(f64::NAN).to_bits(),
        );
        match seen.get(&key) {
            Some(&pos) => out[pos].multiplicity += 1,
            None => {
                seen.insert(key, out.len());
                out.push(SamplePoint {
                    word: BranchWord::from_index(i as u32, depth),
                    z,
                    multiplicity: 1,
                });
            }
        }
    }
    out
}

impl<T: Real> JuliaSample<T> {
    /// CSV serialization: word,re,im,multiplicity.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("word,re,im,multiplicity\n");
        for pt in &self.points {
            s.push_str(&format!(
                "{},{},{},{}\n",
                pt.word,
                pt.z.re.to_f64().unwrap_or(f64::NAN),
                pt.z.im.to_f64().unwrap_or(f64::NAN),
                pt.multiplicity
            ));
        }
        s
    }
}
