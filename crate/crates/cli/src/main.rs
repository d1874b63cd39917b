//! Command-line surface: tables and plots for the dimension asymptotics,
//! plus the acceptance suite. Subcommands: omega, alpha0, dim, deriv,
//! rescale, measure, verify.

mod config;
mod output;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use juliadim::dynamics::RayParameter;
use juliadim::verify::VerifyLevel;
use juliadim::{asymptotics, derivative, measures, pressure, rescaling, verify};

use config::{out_dir, read_config_file, resolve, resolve_list, RunConfig};

#[derive(Parser)]
#[command(
    name = "juliadim",
    about = "Hausdorff dimension of Julia sets of z^2 - 2 + delta near delta = 0: \
             profile tables, dimension scans, derivative estimates, and the acceptance suite",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: CommonFlags,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Output directory for tables and plots.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker thread count (default: one per CPU).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized sampling modes.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Target tolerance for dimension extrapolation.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Preimage-tree depth for measure discretizations.
    #[arg(long, global = true)]
    depth: Option<usize>,

    /// key=value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Profile of the scaled-derivative limit over ray angles (CSV + SVG).
    Omega {
        /// Number of grid points on (0, pi].
        #[arg(long)]
        points: Option<usize>,
    },
    /// The zero crossing of the profile, in radians and degrees.
    Alpha0,
    /// Dimension scan over rays (angle x modulus grid).
    Dim {
        /// Comma-separated ray angles in radians.
        #[arg(long)]
        alphas: Option<String>,
        /// Comma-separated ray moduli (0 means the base parameter).
        #[arg(long)]
        ts: Option<String>,
    },
    /// Directional derivative of the dimension, formula and differences.
    Deriv {
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long)]
        ts: Option<String>,
    },
    /// Rescaled-window convergence toward the limit hyperbola (CSV + SVG).
    Rescale {
        /// Ray angle in radians.
        #[arg(long)]
        alpha: Option<f64>,
        /// Window radius R.
        #[arg(long)]
        r: Option<f64>,
        /// Comma-separated decreasing modulus schedule.
        #[arg(long)]
        ts: Option<String>,
    },
    /// Conformal and invariant measure atoms at one parameter.
    Measure {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Run the acceptance suite and write a JSON report.
    Verify {
        /// "fast" (about two minutes) or "full" (an hour or more).
        #[arg(long)]
        level: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let file_cfg = match &cli.common.config {
        Some(path) => read_config_file(path)?,
        None => HashMap::new(),
    };
    let threads = resolve(cli.common.threads, &file_cfg, "threads", 0)?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    let out = out_dir(cli.common.out.clone(), &file_cfg)?;
    let seed = resolve(cli.common.seed, &file_cfg, "seed", 0)?;
    let tol = resolve(cli.common.tol, &file_cfg, "tol", 1e-4)?;
    let depth = resolve(cli.common.depth, &file_cfg, "depth", 14)?;

    let mut cfg = RunConfig::new(match &cli.command {
        Command::Omega { .. } => "omega",
        Command::Alpha0 => "alpha0",
        Command::Dim { .. } => "dim",
        Command::Deriv { .. } => "deriv",
        Command::Rescale { .. } => "rescale",
        Command::Measure { .. } => "measure",
        Command::Verify { .. } => "verify",
    });
    cfg.record("out", out.display());
    cfg.record("threads", threads);
    cfg.record("seed", seed);
    cfg.record("tol", tol);
    cfg.record("depth", depth);

    match cli.command {
        Command::Omega { points } => {
            let points = resolve(points, &file_cfg, "points", 500)?;
            cmd_omega(&out, cfg, points)
        }
        Command::Alpha0 => cmd_alpha0(&out, cfg),
        Command::Dim { alphas, ts } => {
            let alphas = resolve_list(alphas.as_deref(), &file_cfg, "alphas", &[PI])?;
            let ts =
                resolve_list(ts.as_deref(), &file_cfg, "ts", &[0.04, 0.01, 0.0025])?;
            cmd_dim(&out, cfg, &alphas, &ts, tol)
        }
        Command::Deriv { alphas, ts } => {
            let alphas = resolve_list(alphas.as_deref(), &file_cfg, "alphas", &[PI])?;
            let ts = resolve_list(ts.as_deref(), &file_cfg, "ts", &[0.04, 0.01])?;
            cmd_deriv(&out, cfg, &alphas, &ts, depth, tol)
        }
        Command::Rescale { alpha, r, ts } => {
            let alpha = resolve(alpha, &file_cfg, "alpha", PI)?;
            let r = resolve(r, &file_cfg, "r", 2.0)?;
            let ts =
                resolve_list(ts.as_deref(), &file_cfg, "ts", &[0.04, 0.01, 0.0025])?;
            cmd_rescale(&out, cfg, alpha, r, &ts, depth.max(12))
        }
        Command::Measure { alpha, t } => {
            let alpha = resolve(alpha, &file_cfg, "alpha", PI)?;
            let t = resolve(t, &file_cfg, "t", 0.04)?;
            cmd_measure(&out, cfg, alpha, t, depth, tol)
        }
        Command::Verify { level } => {
            let level = match level.or_else(|| file_cfg.get("level").cloned()) {
                None => VerifyLevel::Fast,
                Some(raw) => VerifyLevel::parse(&raw)
                    .ok_or_else(|| format!("unknown verify level {raw:?} (fast|full)"))?,
            };
            cmd_verify(&out, cfg, level)
        }
    }
}

fn cmd_omega(out: &std::path::Path, mut cfg: RunConfig, points: usize) -> Result<ExitCode, String> {
    if points == 0 {
        return Err("omega needs a nonempty grid (--points >= 1)".into());
    }
    cfg.record("points", points);
    let alpha0: f64 = asymptotics::alpha_zero(1e-10).map_err(|e| e.to_string())?;
    cfg.record("alpha0", alpha0);
    let mut rows = Vec::with_capacity(points);
    let mut series = Vec::with_capacity(points);
    for k in 1..=points {
        let alpha = PI * k as f64 / points as f64;
        let omega = asymptotics::omega(alpha).map_err(|e| e.to_string())?;
        rows.push(format!("{alpha},{omega}"));
        series.push((alpha, omega));
    }
    output::write_csv(&out.join("omega.csv"), &cfg, "alpha,omega", &rows)?;
    output::write_line_plot(
        &out.join("omega.svg"),
        "scaled derivative limit over ray angle",
        &series,
        Some((alpha0, "alpha0")),
    )?;
    println!("omega: {points} angles -> {}", out.join("omega.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_alpha0(out: &std::path::Path, cfg: RunConfig) -> Result<ExitCode, String> {
    let alpha0: f64 = asymptotics::alpha_zero(1e-10).map_err(|e| e.to_string())?;
    let rows = vec![format!("{alpha0},{}", alpha0.to_degrees())];
    output::write_csv(&out.join("alpha0.csv"), &cfg, "radians,degrees", &rows)?;
    println!("alpha0 = {alpha0} rad = {} deg", alpha0.to_degrees());
    Ok(ExitCode::SUCCESS)
}

fn cmd_dim(
    out: &std::path::Path,
    mut cfg: RunConfig,
    alphas: &[f64],
    ts: &[f64],
    tol: f64,
) -> Result<ExitCode, String> {
    cfg.record("alphas", join(alphas));
    cfg.record("ts", join(ts));
    let mut rays = Vec::new();
    for &alpha in alphas {
        for &t in ts {
            rays.push(RayParameter::new(alpha, t).map_err(|e| e.to_string())?);
        }
    }
    let mut rows = Vec::new();
    for row in pressure::dimension_scan(&rays, tol) {
        match row.result {
            Ok(est) => rows.push(format!(
                "{},{},{},{},{},ok",
                row.alpha, row.t, est.d_value, est.extrapolation_error, est.depth_used
            )),
            Err(e) => rows.push(format!(
                "{},{},,,,\"{}\"",
                row.alpha,
                row.t,
                e.to_string().replace('"', "'")
            )),
        }
    }
    output::write_csv(
        &out.join("dim.csv"),
        &cfg,
        "alpha,t,d,extrapolation_error,depth,status",
        &rows,
    )?;
    println!("dim: {} rays -> {}", rows.len(), out.join("dim.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_deriv(
    out: &std::path::Path,
    mut cfg: RunConfig,
    alphas: &[f64],
    ts: &[f64],
    depth: usize,
    tol: f64,
) -> Result<ExitCode, String> {
    cfg.record("alphas", join(alphas));
    cfg.record("ts", join(ts));
    let mut rows = Vec::new();
    for &alpha in alphas {
        for &t in ts {
            let ray = RayParameter::new(alpha, t).map_err(|e| e.to_string())?;
            let est = derivative::derivative_formula(ray, depth, tol)
                .map_err(|e| e.to_string())?;
            rows.push(format!(
                "{alpha},{t},formula,{},{},{}",
                est.value, est.scaled, est.error_bar
            ));
            let fd = derivative::derivative_fd(ray, t / 2.0, tol).map_err(|e| e.to_string())?;
            rows.push(format!(
                "{alpha},{t},fd,{},{},{}",
                fd.value, fd.scaled, fd.error_bar
            ));
        }
    }
    output::write_csv(
        &out.join("deriv.csv"),
        &cfg,
        "alpha,t,method,value,scaled,error_bar",
        &rows,
    )?;
    println!("deriv: {} rows -> {}", rows.len(), out.join("deriv.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_rescale(
    out: &std::path::Path,
    mut cfg: RunConfig,
    alpha: f64,
    r: f64,
    ts: &[f64],
    depth: usize,
) -> Result<ExitCode, String> {
    cfg.record("alpha", alpha);
    cfg.record("r", r);
    cfg.record("ts", join(ts));
    // The limit arcs live on (0, pi]; angles beyond pi give the mirror
    // geometry, so fold them.
    let alpha = if alpha > PI { 2.0 * PI - alpha } else { alpha };
    let reports =
        rescaling::convergence_study(alpha, r, ts, depth).map_err(|e| e.to_string())?;
    let rows: Vec<String> = reports
        .iter()
        .zip(ts)
        .map(|(rep, t)| {
            format!(
                "{alpha},{t},{r},{depth},{},{},{}",
                rep.d_h, rep.n_window, rep.n_arc
            )
        })
        .collect();
    output::write_csv(
        &out.join("rescale.csv"),
        &cfg,
        "alpha,t,r,depth,hausdorff,n_window,n_arc",
        &rows,
    )?;
    // Overlay scatter at the smallest modulus.
    let t_last = *ts.last().ok_or("rescale needs a nonempty schedule")?;
    let delta = Complex64::from_polar(t_last, alpha);
    let window = rescaling::rescaled_window(delta, r, depth).map_err(|e| e.to_string())?;
    let arc = rescaling::arc_both_branches(alpha, r, rescaling::ARC_SAMPLES)
        .map_err(|e| e.to_string())?;
    let as_xy = |pts: &[Complex64]| pts.iter().map(|z| (z.re, z.im)).collect::<Vec<_>>();
    output::write_scatter_plot(
        &out.join("rescale.svg"),
        "rescaled window vs limit hyperbola",
        &[("window", as_xy(&window)), ("hyperbola", as_xy(&arc))],
    )?;
    println!(
        "rescale: {} schedule steps -> {}",
        rows.len(),
        out.join("rescale.csv").display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_measure(
    out: &std::path::Path,
    mut cfg: RunConfig,
    alpha: f64,
    t: f64,
    depth: usize,
    tol: f64,
) -> Result<ExitCode, String> {
    cfg.record("alpha", alpha);
    cfg.record("t", t);
    let delta = if t == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(t, alpha)
    };
    let d = if t == 0.0 {
        1.0
    } else {
        pressure::dimension(delta, tol).map_err(|e| e.to_string())?.d_value
    };
    cfg.record("exponent", d);
    let conformal = measures::conformal_atoms(delta, d, depth).map_err(|e| e.to_string())?;
    let (invariant, info) =
        measures::invariant_density(delta, d, &conformal, 14).map_err(|e| e.to_string())?;
    cfg.record("density_iterations", info.iterations);
    let mut rows = Vec::with_capacity(2 * conformal.len());
    for atoms in [&conformal, &invariant] {
        for line in atoms.to_csv().lines().skip(1) {
            rows.push(line.to_string());
        }
    }
    output::write_csv(&out.join("measure.csv"), &cfg, "re,im,weight,kind", &rows)?;
    println!(
        "measure: {} atoms x2 -> {}",
        conformal.len(),
        out.join("measure.csv").display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    out: &std::path::Path,
    mut cfg: RunConfig,
    level: VerifyLevel,
) -> Result<ExitCode, String> {
    cfg.record("level", level.as_str());
    let reports = verify::run(level);
    for report in &reports {
        println!("{}", report.line());
    }
    // The numeric table whose bytes must reproduce across reruns.
    let table = verify::determinism_table().map_err(|e| e.to_string())?;
    let rows: Vec<String> = table.lines().skip(1).map(str::to_string).collect();
    output::write_csv(&out.join("verify.csv"), &cfg, "quantity,value", &rows)?;
    let json = serde_json::json!({
        "level": level.as_str(),
        "passed": reports.iter().all(|r| r.passed),
        "criteria": reports.iter().map(|r| serde_json::json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "seconds": r.seconds,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
        "config": cfg.entries().iter().cloned().collect::<HashMap<_, _>>(),
    });
    std::fs::write(
        out.join("verify_report.json"),
        serde_json::to_string_pretty(&json).map_err(|e| e.to_string())? + "\n",
    )
    .map_err(|e| e.to_string())?;
    if reports.iter().all(|r| r.passed) {
        println!("verify {}: all criteria passed", level.as_str());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verify {}: criteria failed", level.as_str());
        Ok(ExitCode::FAILURE)
    }
}

fn join(vals: &[f64]) -> String {
    vals.iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
