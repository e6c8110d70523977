//! Command implementations. Every input is resolved and validated before any
//! computation starts.

use crate::config::{Angle, FileConfig};
use crate::{
    Cli, Command, GradcheckArgs, LandscapeArgs, MintimeArgs, OptimizerArgs, OutArgs, PointArgs, SpectrumArgs,
    SweepArgs,
};
use qlandscape::experiments::{
    build_grid, gradient_check, hessian_check, min_time_record, min_time_scan, optimize_column, sweep,
    two_segment_landscape, SweepConfig,
};
use qlandscape::io::{
    landscape_file_name, parse_angle, write_json, write_landscape_csv, write_manifest, write_sweep_artifacts,
    SCHEMA_VERSION,
};
use qlandscape::optimize::{Method, OptimizerConfig};
use qlandscape::spectral::{spectrum_report, DomainLabel, LandscapePoint, SpectrumReport, Verdict};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub enum Failure {
    /// Invalid flags or config values.
    Usage(String),
    Runtime(String),
}

impl From<qlandscape::Error> for Failure {
    fn from(e: qlandscape::Error) -> Self {
        match e {
            qlandscape::Error::Config(_) | qlandscape::Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

pub fn run(cli: Cli) -> Outcome {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Sweep(a) => cmd_sweep(&a, &file),
        Command::Spectrum(a) => cmd_spectrum(&a, &file),
        Command::Landscape(a) => cmd_landscape(&a, &file),
        Command::Mintime(a) => cmd_mintime(&a, &file),
        Command::Gradcheck(a) => cmd_gradcheck(&a, &file),
    }
}

/// Flag, then config file, then `QL_OUT_DIR`, then `./results`.
fn out_dir(args: &OutArgs, file: &FileConfig) -> PathBuf {
    args.out
        .clone()
        .or_else(|| file.out.clone())
        .or_else(|| std::env::var_os("QL_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        usage(format!("--{name} must be positive and finite, got {x}"))
    }
}

fn at_least_one(name: &str, n: usize) -> Result<usize, Failure> {
    if n >= 1 {
        Ok(n)
    } else {
        usage(format!("--{name} must be at least 1"))
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(at_least_one("workers", w)?);
    }
    b.build().map_err(|e| Failure::Runtime(format!("cannot start worker pool: {e}")))
}

fn optimizer_settings(opt: &OptimizerArgs, file: &FileConfig) -> Result<SweepConfig, Failure> {
    let names = opt.methods.clone().or_else(|| file.methods.clone());
    let methods = match names {
        None => Method::ALL.to_vec(),
        Some(list) => list
            .iter()
            .map(|s| s.parse::<Method>().map_err(|_| Failure::Usage(format!("unknown method '{s}' (use grape, de, da)"))))
            .collect::<Result<Vec<_>, _>>()?,
    };
    if methods.is_empty() {
        return usage("--methods needs at least one of grape, de, da");
    }
    let mut o = OptimizerConfig::new(Method::Grape);
    o.bound = positive("nu", opt.nu.or(file.nu).unwrap_or(o.bound))?;
    o.grape_box = opt.grape_box || file.grape_box.unwrap_or(false);
    o.init_amplitude = opt.amplitude.or(file.amplitude).unwrap_or(o.init_amplitude);
    o.max_evals = at_least_one("max-evals", opt.max_evals.or(file.max_evals).unwrap_or(o.max_evals))?;
    o.max_iters = at_least_one("max-iters", opt.max_iters.or(file.max_iters).unwrap_or(o.max_iters))?;
    o.tolerance = opt.tolerance.or(file.tolerance).unwrap_or(o.tolerance);
    let cfg = SweepConfig {
        methods,
        runs: at_least_one("runs", opt.runs.or(file.runs).unwrap_or(2))?,
        base_seed: opt.seed.or(file.seed).unwrap_or(0),
        optimizer: o,
        only_domain: None,
        only_column: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_angle(flag: &Option<String>, file: &Option<Angle>, name: &str) -> Result<Option<f64>, Failure> {
    match (flag, file) {
        (Some(s), _) => parse_angle(s).map(Some).map_err(|e| Failure::Usage(format!("--{name}: {e}"))),
        (None, Some(a)) => a.resolve().map(Some).map_err(|e| Failure::Usage(format!("{name} in config: {e}"))),
        (None, None) => Ok(None),
    }
}

fn point(args: &PointArgs, file: &FileConfig) -> Result<LandscapePoint, Failure> {
    let phi_w = resolve_angle(&args.phi_w, &file.phi_w, "phi-w")?;
    let t = resolve_angle(&args.t, &file.t, "T")?;
    match (phi_w, t) {
        (Some(p), Some(t)) => Ok(LandscapePoint::new(p, t)?),
        _ => usage("both --phi-w and --T are required"),
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn finish(dir: &Path, files: &[PathBuf]) -> Result<(), Failure> {
    write_manifest(dir, &command_line(), files)?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, file: &FileConfig) -> Outcome {
    let mut cfg = optimizer_settings(&args.opt, file)?;
    if let Some(label) = args.only_domain.as_ref().or(file.only_domain.as_ref()) {
        let d: DomainLabel = label.parse().map_err(|e: qlandscape::Error| Failure::Usage(e.to_string()))?;
        if matches!(d, DomainLabel::D4 | DomainLabel::Excluded) {
            return usage("--only-domain accepts D1, D2 or D3; the grid has no D4 nodes");
        }
        cfg.only_domain = Some(d);
    }
    let dir = out_dir(&args.out, file);
    let pool = pool(args.opt.workers.or(file.workers))?;
    let grid = build_grid();
    let outcome = pool.install(|| sweep(&grid, &cfg))?;
    let artifacts = write_sweep_artifacts(&dir, &cfg, &grid, &outcome)?;

    println!("{} records, {} failed nodes", outcome.records.len(), outcome.failures.len());
    match &artifacts.tables {
        Some((tj, td)) => println!("\n{}\n{}", tj.render(), td.render()),
        None => println!("tables skipped: {}", artifacts.tables_skipped.as_deref().unwrap_or("")),
    }
    if let Some(stats) = &artifacts.stats {
        for d in &stats.delta {
            println!(
                "{}: {} nodes, max |Δ| = {:.3e}, mean |Δ| = {:.4}",
                d.subset, d.count, d.max_abs, d.mean_abs
            );
        }
        for a in &stats.amplitudes {
            println!(
                "{}: {} amplitudes in [{:.3}, {:.3}], mean |z| = {:.4}, {:.1}% with |z| ≤ 0.005",
                a.subset,
                a.count,
                a.min,
                a.max,
                a.mean_abs,
                100.0 * a.fraction_abs_le_0_005
            );
        }
    }
    finish(&dir, &artifacts.files)?;
    if outcome.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &outcome.failures {
            eprintln!("node (i={}, j={}) failed: {}", f.i, f.j, f.message);
        }
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct SpectrumEntry {
    j: Option<usize>,
    i: Option<usize>,
    #[serde(rename = "phi_W")]
    phi_w: f64,
    #[serde(rename = "T")]
    t: f64,
    domain: DomainLabel,
    verdict: Option<Verdict>,
    error: Option<String>,
    report: Option<SpectrumReport>,
}

#[derive(Serialize)]
struct SpectrumDocument<'a> {
    schema: u32,
    n_eigs: usize,
    entries: &'a [SpectrumEntry],
}

fn spectrum_entry(p: &LandscapePoint, n_eigs: usize, ji: Option<(usize, usize)>) -> SpectrumEntry {
    let r = spectrum_report(p, n_eigs);
    let (verdict, error, report) = match r {
        Ok(rep) => (Some(rep.verdict), None, Some(rep)),
        Err(e) => (None, Some(e.to_string()), None),
    };
    SpectrumEntry {
        j: ji.map(|x| x.0),
        i: ji.map(|x| x.1),
        phi_w: p.phi_w,
        t: p.t,
        domain: p.domain(),
        verdict,
        error,
        report,
    }
}

fn verdict_name(v: Option<Verdict>) -> &'static str {
    match v {
        Some(Verdict::NegativeDefinite) => "NEGATIVE_DEFINITE",
        Some(Verdict::Saddle) => "SADDLE",
        Some(Verdict::GlobalMaxBoundary) => "GLOBAL_MAX_BOUNDARY",
        Some(Verdict::NotApplicable) => "NOT_APPLICABLE",
        None => "ERROR",
    }
}

fn cmd_spectrum(args: &SpectrumArgs, file: &FileConfig) -> Outcome {
    let n_eigs = at_least_one("n-eigs", args.n_eigs.or(file.n_eigs).unwrap_or(8))?;
    let dir = out_dir(&args.out, file);
    let entries: Vec<SpectrumEntry> = if args.grid {
        let nodes = build_grid().nodes();
        let pool = pool(args.workers.or(file.workers))?;
        pool.install(|| {
            nodes
                .par_iter()
                .map(|n| {
                    let p = LandscapePoint::new(n.phi_w, n.t).expect("grid nodes lie in the square");
                    spectrum_entry(&p, n_eigs, Some((n.j, n.i)))
                })
                .collect()
        })
    } else {
        vec![spectrum_entry(&point(&args.point, file)?, n_eigs, None)]
    };

    println!("{:>10} {:>10} {:>9} {:>18} {:>6} {:>10}", "phi_W", "T", "domain", "verdict", "eigs", "residual");
    for e in &entries {
        let (count, res) = e.report.as_ref().map_or((0, 0.0), |r| (r.eigenvalues.len(), r.max_residual()));
        println!(
            "{:>10.6} {:>10.6} {:>9} {:>18} {:>6} {:>10.2e}",
            e.phi_w,
            e.t,
            e.domain.as_str(),
            verdict_name(e.verdict),
            count,
            res
        );
        if let Some(err) = &e.error {
            eprintln!("  ({}, {}): {err}", e.phi_w, e.t);
        }
    }
    let count = |v: Verdict| entries.iter().filter(|e| e.verdict == Some(v)).count();
    let errors = entries.iter().filter(|e| e.error.is_some()).count();
    println!(
        "summary: {} NEGATIVE_DEFINITE, {} SADDLE, {} NOT_APPLICABLE, {errors} errors",
        count(Verdict::NegativeDefinite),
        count(Verdict::Saddle),
        count(Verdict::NotApplicable)
    );

    std::fs::create_dir_all(&dir).map_err(qlandscape::Error::from)?;
    let path = dir.join("spectrum.json");
    write_json(&path, &SpectrumDocument { schema: SCHEMA_VERSION, n_eigs, entries: &entries })?;
    finish(&dir, &[path])?;
    Ok(if errors == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_landscape(args: &LandscapeArgs, file: &FileConfig) -> Outcome {
    let p = point(&args.point, file)?;
    let nu = positive("nu", args.nu.or(file.nu).unwrap_or(50.0))?;
    let step = positive("step", args.step.or(file.step).unwrap_or(1.0))?;
    let grid = two_segment_landscape(p.phi_w, p.t, nu, step)?;
    let dir = out_dir(&args.out, file);
    std::fs::create_dir_all(&dir).map_err(qlandscape::Error::from)?;
    let path = dir.join(landscape_file_name(p.phi_w, p.t));
    write_landscape_csv(&path, &grid)?;

    let n = grid.size();
    let (s, q) = grid.argmax();
    println!("{n}×{n} grid over [−{nu}, {nu}]², step {step}, domain {}", p.domain());
    println!("max J = {:.6} at (a1, a2) = ({}, {})", grid.max(), grid.axis[s], grid.axis[q]);
    if let Some(c) = grid.center() {
        let kind = if grid.is_strict_local_max(c, c) {
            "strict grid-local maximum"
        } else if grid.is_saddle_like(c, c) {
            "saddle (neighbours above and below)"
        } else {
            "neither strict maximum nor saddle"
        };
        println!("J(0, 0) = {:.6}: {kind}", grid.value(c, c));
    }
    finish(&dir, &[path])?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mintime(args: &MintimeArgs, file: &FileConfig) -> Outcome {
    let phi_w = resolve_angle(&args.phi_w, &file.phi_w, "phi-w")?.ok_or(Failure::Usage("--phi-w is required".into()))?;
    let record = min_time_record(phi_w)?;
    let cfg = optimizer_settings(&args.opt, file)?;
    let dir = out_dir(&args.out, file);
    let grid = build_grid();
    let pool = pool(args.opt.workers.or(file.workers))?;
    let column = pool.install(|| optimize_column(phi_w, &grid, &cfg))?;
    let scan = min_time_scan(phi_w, column, grid.step())?;

    println!("T_min = π − φ_W = {:.6} (J at T_min with zero control: {:.15})", record.t_min, record.achieved_j);
    println!("{:>10} {:>12} {:>12}", "T", "J_zero", "J_hat");
    for s in &scan.samples {
        println!("{:>10.6} {:>12.6} {:>12.6}", s.t, s.j_zero, s.j_hat);
    }
    match scan.first_reaching_t {
        Some(t) => println!("first grid T with Ĵ ≥ 1 − 1e-3: {t:.6} (within one step: {})", scan.within_one_step),
        None => println!("no grid T reaches Ĵ ≥ 1 − 1e-3"),
    }
    std::fs::create_dir_all(&dir).map_err(qlandscape::Error::from)?;
    let path = dir.join("mintime.json");
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        #[serde(flatten)]
        scan: &'a qlandscape::experiments::MinTimeScan,
    }
    write_json(&path, &Doc { schema: SCHEMA_VERSION, scan: &scan })?;
    finish(&dir, &[path])?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gradcheck(args: &GradcheckArgs, file: &FileConfig) -> Outcome {
    let samples = at_least_one("samples", args.samples.or(file.samples).unwrap_or(100))?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let grad_tol = positive("grad-tol", args.grad_tol.or(file.grad_tol).unwrap_or(1e-6))?;
    let hess_tol = positive("hess-tol", args.hess_tol.or(file.hess_tol).unwrap_or(1e-3))?;
    let dir = out_dir(&args.out, file);

    let g = gradient_check(samples, seed)?;
    let h = hessian_check(samples, seed)?;
    let checks = [
        ("gradient vs central differences", &g.worst_relative, grad_tol),
        ("gradient at zero control", &g.zero_gradient, 1e-10),
        ("Hessian quadratic form vs second differences", &h.worst_relative, hess_tol),
    ];
    let mut violated = false;
    for (name, w, tol) in checks {
        let ok = w.value <= tol;
        violated |= !ok;
        println!(
            "{} {name}: worst {:.3e} at node (i={}, j={}), tolerance {tol:e}",
            if ok { "ok  " } else { "FAIL" },
            w.value,
            w.i,
            w.j
        );
    }
    std::fs::create_dir_all(&dir).map_err(qlandscape::Error::from)?;
    let path = dir.join("gradcheck.json");
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        seed: u64,
        gradient: &'a qlandscape::experiments::GradientCheck,
        hessian: &'a qlandscape::experiments::HessianCheck,
    }
    write_json(&path, &Doc { schema: SCHEMA_VERSION, seed, gradient: &g, hessian: &h })?;
    finish(&dir, &[path])?;
    Ok(if violated { ExitCode::from(2) } else { ExitCode::SUCCESS })
}
