//! The acceptance suite: twelve numbered criteria covering the asymptotic
//! profile, the dimension pipeline, the derivative limit, the key
//! integral, rescaled geometry, measures, invariants, and determinism.
//! The same runner backs the `acceptance` integration test and the
//! `verify` subcommand of the CLI.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{self, KeyIntegralKind};
use crate::cylinders::{self, CylinderId, Family};
use crate::derivative;
use crate::dynamics::{self, RayParameter, SampleMode, Sign};
use crate::error::Result;
use crate::measures;
use crate::pressure;
use crate::rescaling;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyLevel {
    /// Criteria 1-5, 11, 12: closed forms, base-point dimension, the
    /// invariant bundle, and determinism (about two minutes).
    Fast,
    /// All twelve criteria, including the small-|delta| limits (an hour
    /// or more at one worker).
    Full,
}

impl VerifyLevel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fast" => Some(VerifyLevel::Fast),
            "full" => Some(VerifyLevel::Full),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyLevel::Fast => "fast",
            VerifyLevel::Full => "full",
        }
    }

    pub fn criterion_ids(&self) -> Vec<usize> {
        match self {
            VerifyLevel::Fast => vec![1, 2, 3, 4, 5, 11, 12],
            VerifyLevel::Full => (1..=12).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} [{}] {} ({:.1}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERION_NAMES: [&str; 12] = [
    "omega at pi closed form",
    "zero crossing angle alpha0",
    "omega / key-integral identity",
    "slope constant sqrt(6)/(3 pi log 2)",
    "dimension at the base point",
    "real-ray slope fit",
    "scaled derivative vs omega profile",
    "key integral window comparison",
    "rescaled window geometry",
    "measure ground truths",
    "invariant bundle",
    "deterministic reruns",
];

/// Run a single criterion by id (1-based).
pub fn run_criterion(id: usize) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_omega_at_pi(),
        2 => criterion_alpha_zero(),
        3 => criterion_identity_grid(),
        4 => criterion_slope_constant(),
        5 => criterion_dimension_base(),
        6 => criterion_real_ray_fit(),
        7 => criterion_derivative_vs_omega(),
        8 => criterion_key_integral(),
        9 => criterion_rescaled_geometry(),
        10 => criterion_measures(),
        11 => criterion_invariants(),
        12 => criterion_determinism(),
        _ => Err(crate::Error::Domain(format!("no criterion {id}"))),
    };
    let (passed, detail) = match outcome {
        Ok((passed, detail)) => (passed, detail),
        Err(e) => (false, format!("errored: {e}")),
    };
    CriterionReport {
        id,
        name: CRITERION_NAMES[id - 1],
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Run the whole suite at a level.
pub fn run(level: VerifyLevel) -> Vec<CriterionReport> {
    level.criterion_ids().into_iter().map(run_criterion).collect()
}

type Outcome = Result<(bool, String)>;

// -- criterion 1 ------------------------------------------------------------

fn criterion_omega_at_pi() -> Outcome {
    let omega = asymptotics::omega(PI)?;
    let closed = -1.0 / (6f64.sqrt() * PI * 2f64.ln());
    let identity_err = (omega - closed).abs();
    // Correctly rounded 6-decimal value of -1/(sqrt(6) pi log 2).
    let decimal_err = (omega - (-0.187477)).abs();
    let passed = identity_err < 1e-12 && decimal_err < 2e-6;
    Ok((
        passed,
        format!("omega(pi) = {omega:.15}, closed-form gap {identity_err:.2e}, decimal gap {decimal_err:.2e}"),
    ))
}

// -- criterion 2 ------------------------------------------------------------

fn criterion_alpha_zero() -> Outcome {
    let alpha0: f64 = asymptotics::alpha_zero(1e-10)?;
    let deg = alpha0.to_degrees();
    let passed = deg > 36.0 && deg < 38.0 && (2.0 * deg - 74.0).abs() <= 2.0;
    Ok((passed, format!("alpha0 = {deg:.4} deg, opening angle {:.4} deg", 2.0 * deg)))
}

// -- criterion 3 ------------------------------------------------------------

fn criterion_identity_grid() -> Outcome {
    let denom = 6.0 * PI * 2f64.ln();
    let mut worst = 0.0f64;
    for k in 1..=100 {
        let alpha = PI * k as f64 / 100.0;
        let omega = asymptotics::omega(alpha)?;
        let key = asymptotics::key_integral(alpha, 2.0, KeyIntegralKind::LimitR)?;
        worst = worst.max((omega - (-key.value / denom)).abs());
    }
    Ok((worst < 1e-12, format!("worst identity gap {worst:.2e} over 100 angles")))
}

// -- criterion 4 ------------------------------------------------------------

fn criterion_slope_constant() -> Outcome {
    let c: f64 = asymptotics::slope_constant();
    let closed = 6f64.sqrt() / (3.0 * PI * 2f64.ln());
    let passed = (c - closed).abs() < 1e-14 && (c - 0.374955).abs() < 1e-5 && c > 0.362;
    Ok((passed, format!("constant = {c:.7}, above the 0.362 threshold")))
}

// -- criterion 5 ------------------------------------------------------------

fn criterion_dimension_base() -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    let est = pressure::dimension_with_depth(zero, 1e-4, 22)?;
    let mut exact = true;
    for n in [8usize, 12, 16] {
        exact &= pressure::pressure_at(zero, 0.0, n)? == 2f64.ln();
    }
    let passed = (est.d_value - 1.0).abs() <= 2e-3 && exact;
    Ok((
        passed,
        format!(
            "d(0) = {:.6} at depth {}, P_n(0) = log 2 exactly: {exact}",
            est.d_value, est.depth_used
        ),
    ))
}

// -- criterion 6 ------------------------------------------------------------

const T_SCHEDULE: [f64; 3] = [0.04, 0.01, 0.0025];

fn criterion_real_ray_fit() -> Outcome {
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut detail = String::new();
    for t in T_SCHEDULE {
        let est = pressure::dimension(Complex64::new(-t, 0.0), 1e-4)?;
        let x = t.sqrt();
        let y = 1.0 - est.d_value;
        sxy += x * y;
        sxx += x * x;
        let _ = write!(detail, "d({t}) = {:.6}; ", est.d_value);
    }
    let c = sxy / sxx;
    let _ = write!(detail, "fitted slope {c:.4}");
    Ok((c >= 0.30 && c <= 0.45, detail))
}

// -- criterion 7 ------------------------------------------------------------

fn criterion_derivative_vs_omega() -> Outcome {
    let t = 0.0025;
    let mut passed = true;
    let mut detail = String::new();
    for alpha in [PI / 2.0, 3.0 * PI / 4.0, PI] {
        let omega = asymptotics::omega(alpha)?;
        let ray = RayParameter::new(alpha, t)?;
        let formula = derivative::derivative_formula(ray, 16, 1e-4)?;
        let fd = derivative::derivative_fd(ray, 0.0015, 1e-4)?;
        let formula_ok = (formula.scaled / omega - 1.0).abs() <= 0.3;
        let fd_ok = (fd.scaled / omega - 1.0).abs() <= 0.3;
        let agree = (formula.value - fd.value).abs() <= formula.error_bar + fd.error_bar;
        passed &= formula_ok && fd_ok && agree;
        let _ = write!(
            detail,
            "alpha {alpha:.3}: omega {omega:.4}, formula {:.4}, fd {:.4}, agree {agree}; ",
            formula.scaled, fd.scaled
        );
    }
    Ok((passed, detail))
}

// -- criterion 8 ------------------------------------------------------------

fn criterion_key_integral() -> Outcome {
    let mut passed = true;
    let mut detail = String::new();
    for alpha in [PI, PI / 2.0] {
        let mut gaps = Vec::new();
        for (i, &t) in T_SCHEDULE.iter().enumerate() {
            let depth = if i == T_SCHEDULE.len() - 1 { 18 } else { 16 };
            let ray = RayParameter::new(alpha, t)?;
            let rep = derivative::key_integral_check(ray, 2.0, depth)?;
            gaps.push(rep.rel_gap);
        }
        let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
        let last = *gaps.last().unwrap();
        passed &= decreasing && last < 0.2;
        let _ = write!(detail, "alpha {alpha:.3}: gaps {gaps:.3?}, final {last:.3}; ");
    }
    Ok((passed, detail))
}

// -- criterion 9 ------------------------------------------------------------

fn criterion_rescaled_geometry() -> Outcome {
    let mut passed = true;
    let mut detail = String::new();
    for alpha in [PI / 2.0, PI] {
        let rows = rescaling::convergence_study(alpha, 2.0, &T_SCHEDULE, 20)?;
        let dh: Vec<f64> = rows.iter().map(|r| r.d_h).collect();
        let decreasing = dh.windows(2).all(|w| w[1] < w[0]);
        let last = *dh.last().unwrap();
        passed &= decreasing && last < 0.1;
        let _ = write!(detail, "alpha {alpha:.3}: d_H {dh:.4?}; ");
    }
    Ok((passed, detail))
}

// -- criterion 10 -----------------------------------------------------------

fn criterion_measures() -> Outcome {
    let zero = Complex64::new(0.0, 0.0);
    // Depth-18 conformal atoms against the flat measure on [-2, 2].
    let atoms = measures::conformal_atoms(zero, 1.0, 18)?;
    let mut pairs: Vec<(f64, f64)> = atoms
        .z
        .iter()
        .zip(&atoms.weight)
        .map(|(z, w)| (z.re, *w / measures::TOTAL_MASS))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    let mut ks = 0.0f64;
    for (x, w) in pairs {
        let target = (x + 2.0) / 4.0;
        ks = ks.max((acc - target).abs());
        acc += w;
        ks = ks.max((acc - target).abs());
    }
    // Central density value and the Lyapunov integral.
    let h0 = measures::density_at(zero, 1.0, zero, 12)?;
    let h0_gap = (h0 / (2.0 / PI) - 1.0).abs();
    let atoms14 = measures::conformal_atoms(zero, 1.0, 14)?;
    let (mu, _) = measures::invariant_density(zero, 1.0, &atoms14, 12)?;
    let lyap = measures::integrate(&mu, |z| (2.0 * z).norm().ln())?;
    let lyap_gap = (lyap / (4.0 * 2f64.ln()) - 1.0).abs();
    // Conformality residual on a cylinder pair at depth 18.
    let delta = Complex64::new(-0.1, 0.0);
    let d = pressure::dimension(delta, 1e-4)?.d_value;
    let catoms = measures::conformal_atoms(delta, d, 18)?;
    let match_id = |id: CylinderId, i: usize| {
        let word = dynamics::BranchWord::from_index(i as u32, 18);
        cylinders::word_matches(id, &word)
    };
    let plus = CylinderId::new(Family::Plus2, 1);
    let minus = CylinderId::new(Family::Minus2, 2);
    let lhs: f64 = (0..catoms.len())
        .filter(|&i| match_id(plus, i))
        .map(|i| catoms.weight[i])
        .sum();
    let rhs: f64 = (0..catoms.len())
        .filter(|&i| match_id(minus, i))
        .map(|i| catoms.weight[i] * (2.0 * catoms.z[i]).norm().powf(d))
        .sum();
    let conf_resid = ((lhs - rhs) / lhs).abs();
    let passed = ks < 0.02 && h0_gap < 0.02 && lyap_gap < 0.03 && conf_resid < 0.05;
    Ok((
        passed,
        format!(
            "KS {ks:.4}, density gap {h0_gap:.4}, Lyapunov gap {lyap_gap:.4}, conformality residual {conf_resid:.4}"
        ),
    ))
}

// -- criterion 11 -----------------------------------------------------------

/// Floating-point conditioning guard for the closed-form derivative law:
/// orbits passing closer than this to +-2 lose all significance in
/// 4 - z^2 and are skipped (measured worst relative error off the guard
/// is 8e-13 over hundreds of random words).
const DERIV_LAW_GUARD: f64 = 1e-4;

fn criterion_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // Branch round-trips f(f_s^{-1}(z)) = z to 1e-12.
    let mut round_trip_worst = 0.0f64;
    for _ in 0..200 {
        let delta = random_admissible(&mut rng);
        let z = Complex64::new(rng.gen_range(-1.8..1.8), rng.gen_range(-0.3..0.3));
        for sign in [Sign::Plus, Sign::Minus] {
            if let Ok(w) = dynamics::inverse_branch(delta, z, sign) {
                let back = dynamics::apply(delta, w, 1);
                round_trip_worst = round_trip_worst.max((back - z).norm() / (1.0 + z.norm()));
            }
        }
    }
    // Closed-form derivative law along depth-10 words at the base point.
    let zero = Complex64::new(0.0, 0.0);
    let mut law_worst = 0.0f64;
    let mut law_checked = 0;
    for _ in 0..200 {
        let depth = rng.gen_range(4..=10);
        let index = rng.gen_range(0u32..(1 << depth));
        let word = dynamics::BranchWord::from_index(index, depth);
        let mut z = Complex64::new(-1.0, 0.0);
        let mut deriv = Complex64::new(1.0, 0.0);
        let mut conditioning = f64::INFINITY;
        let mut ok = true;
        for k in 1..=depth {
            match dynamics::inverse_branch(zero, z, word.sign(k)) {
                Ok(w) => z = w,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
            conditioning = conditioning.min((4.0 - z * z).norm());
            deriv *= 2.0 * z;
        }
        if !ok || conditioning < DERIV_LAW_GUARD {
            continue;
        }
        let oracle = 2f64.powi(depth as i32) * (3.0 / (4.0 - z * z).norm()).sqrt();
        law_worst = law_worst.max((deriv.norm() / oracle - 1.0).abs());
        law_checked += 1;
    }
    // Imaginary-part containment |Im z| <= 2 sqrt(|delta|) at depth 18.
    let mut containment_violations = 0usize;
    for _ in 0..20 {
        let delta = random_admissible(&mut rng);
        let bound = 2.0 * delta.norm().sqrt();
        let sample = dynamics::julia_sample(delta, 18, SampleMode::FullTree, 0)?;
        containment_violations += sample
            .points
            .iter()
            .filter(|pt| pt.z.im.abs() > bound)
            .count();
    }
    // Zero-family diameter slope -log(lambda)/2 within 10%.
    let delta6 = Complex64::new(-0.0001, 0.0);
    let lambda = dynamics::fixed_point(delta6)?.lambda.norm();
    let mut pts = Vec::new();
    for n in 1u32..=6 {
        let id = CylinderId::new(Family::ZeroPlus, n);
        let sample = cylinders::cylinder_points(delta6, id, n as usize + 10)?;
        pts.push((f64::from(n), sample.diam_estimate.ln()));
    }
    let m = pts.len() as f64;
    let (sx, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let slope_gap = (slope / (-lambda.ln() / 2.0) - 1.0).abs();
    // Location band checks near the fixed points.
    let mut band_violations = 0usize;
    for delta in [Complex64::new(-0.01, 0.0), Complex64::from_polar(0.02, 3.0 * PI / 4.0)] {
        let rep = rescaling::band_check(delta, 14)?;
        if rep.skipped {
            band_violations += 1;
        }
        band_violations += rep.band_violations + rep.width_violations;
    }
    let passed = round_trip_worst < 1e-12
        && law_worst < 1e-10
        && law_checked > 100
        && containment_violations == 0
        && slope_gap < 0.1
        && band_violations == 0;
    Ok((
        passed,
        format!(
            "round-trip {round_trip_worst:.2e}, derivative law {law_worst:.2e} ({law_checked} words), \
             containment violations {containment_violations}, diameter slope gap {slope_gap:.3}, \
             band violations {band_violations}"
        ),
    ))
}

fn random_admissible(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let delta = Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
        if delta.norm() > 1e-3 && dynamics::check_admissible(delta).is_ok() {
            return delta;
        }
    }
}

// -- criterion 12 -----------------------------------------------------------

/// The numeric table whose byte-stability criterion 12 asserts: dimension
/// scans, the omega profile, and measure integrals, formatted with full
/// round-trip precision.
pub fn determinism_table() -> Result<String> {
    let mut out = String::from("quantity,value\n");
    let rays = vec![
        RayParameter::new(PI, 0.04)?,
        RayParameter::new(PI / 2.0, 0.01)?,
    ];
    for row in pressure::dimension_scan(&rays, 1e-4) {
        let est = row.result.map_err(crate::Error::from)?;
        let _ = writeln!(out, "d({:.3};{}),{:e}", row.alpha, row.t, est.d_value);
    }
    for (alpha, omega) in asymptotics::omega_profile::<f64>(50)? {
        let _ = writeln!(out, "omega({alpha:e}),{omega:e}");
    }
    let atoms = measures::conformal_atoms(Complex64::new(-0.04, 0.0), 0.95, 14)?;
    for (name, value) in [
        ("mass", measures::integrate(&atoms, |_| 1.0)?),
        ("re", measures::integrate(&atoms, |z| z.re)?),
        ("abs2", measures::integrate(&atoms, |z| z.norm_sqr())?),
    ] {
        let _ = writeln!(out, "conformal.{name},{value:e}");
    }
    Ok(out)
}

fn criterion_determinism() -> Outcome {
    // The same table from thread pools of different sizes must agree
    // byte for byte (fixed-order compensated reductions).
    let run_with = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::Error::Domain(format!("thread pool: {e}")))?;
        pool.install(determinism_table)
    };
    let a = run_with(1)?;
    let b = run_with(3)?;
    let c = run_with(2)?;
    let passed = a == b && b == c && a.lines().count() > 50;
    Ok((
        passed,
        format!("{} table lines, byte-identical across 1/2/3 threads: {passed}", a.lines().count()),
    ))
}
