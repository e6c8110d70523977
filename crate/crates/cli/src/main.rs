//! `ql`: grid sweeps, Hessian spectra, two-segment landscapes, minimal times
//! and derivative checks for single-qubit phase-shift gates.
//!
//! Exit codes: 0 success, 1 runtime error or failed sweep nodes,
//! 2 invalid arguments or a violated derivative-check tolerance.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "ql", version, about = "Control-landscape toolkit for single-qubit phase-shift gates")]
pub struct Cli {
    /// TOML file with default values for any flag (keys use underscores, e.g. `max_evals`).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize all 110 grid nodes; write sweep.json, table1.csv, table2.csv, stats.json.
    Sweep(SweepArgs),
    /// Analytic Hessian spectrum at one point or at every grid node.
    Spectrum(SpectrumArgs),
    /// Objective on a uniform grid of two-segment controls.
    Landscape(LandscapeArgs),
    /// Minimal final time π − φ_W and the optimized frontier along T.
    Mintime(MintimeArgs),
    /// Randomized gradient and Hessian checks against finite differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory [default: $QL_OUT_DIR, else ./results].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// Comma-separated subset of grape, de, da [default: grape,de,da].
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    /// Runs per method and node [default: 2].
    #[arg(long)]
    pub runs: Option<usize>,
    /// Master seed; run k of a node uses seed + ordinal·runs_per_node + k [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Box half-width ν for DE and DA [default: 50].
    #[arg(long)]
    pub nu: Option<f64>,
    /// Confine GRAPE to the same [−ν, ν] box as DE and DA.
    #[arg(long)]
    pub grape_box: bool,
    /// GRAPE start amplitudes are uniform in [−A, A] [default: 1].
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Objective evaluations per DE/DA run [default: 50000].
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Iterations per GRAPE run [default: 1000].
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Relative improvement below which an ascent stops [default: 1e-14].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Worker threads [default: number of CPUs]; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub opt: OptimizerArgs,
    /// Only nodes of one domain: D1, D2 or D3 (D3 includes the corner (π, π/2)).
    #[arg(long, value_name = "LABEL")]
    pub only_domain: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Gate phase φ_W in (0, π]: radians or a fraction of π such as 3pi/5.
    #[arg(long = "phi-w", value_name = "ANGLE", allow_hyphen_values = true)]
    pub phi_w: Option<String>,
    /// Final time T in (0, π/2]: radians or a fraction of π such as pi/20.
    #[arg(long = "T", value_name = "ANGLE", allow_hyphen_values = true)]
    pub t: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Analyse every grid node instead of one point.
    #[arg(long, conflicts_with_all = ["phi_w", "t"])]
    pub grid: bool,
    /// Oscillatory eigenvalues with a > 2 kept per point [default: 8].
    #[arg(long)]
    pub n_eigs: Option<usize>,
    /// Worker threads for --grid [default: number of CPUs].
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Grid half-width ν [default: 50].
    #[arg(long)]
    pub nu: Option<f64>,
    /// Grid step Δa; 2ν/Δa must be whole [default: 1].
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MintimeArgs {
    /// Gate phase φ_W in [π/2, π].
    #[arg(long = "phi-w", value_name = "ANGLE")]
    pub phi_w: Option<String>,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GradcheckArgs {
    /// Random (node, control) pairs for the gradient and random directions for the Hessian [default: 100].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for the random nodes, controls and directions [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest accepted relative gradient error [default: 1e-6].
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Largest accepted relative Hessian error [default: 1e-3].
    #[arg(long)]
    pub hess_tol: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
