//! Multi-method optimization of every grid node.

use super::grid::{GridNode, GridSpec};
use crate::dynamics::{objective_at_zero, GateProblem, SystemConfig};
use crate::error::{Error, Result};
use crate::optimize::{multi_run, Method, OptimizerConfig, RunResult};
use crate::spectral::DomainLabel;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub methods: Vec<Method>,
    pub runs: usize,
    pub base_seed: u64,
    /// Budgets, bounds and method parameters; method and seed are overridden per run.
    pub optimizer: OptimizerConfig,
    /// Restrict to one domain group (D3 includes the corner `(π, π/2)`).
    pub only_domain: Option<DomainLabel>,
    /// Restrict to one φ_W column.
    pub only_column: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            runs: 2,
            base_seed: 0,
            optimizer: OptimizerConfig::new(Method::Grape),
            only_domain: None,
            only_column: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs per method must be at least 1".into()));
        }
        for &m in &self.methods {
            self.optimizer.clone().with_method(m).validate()?;
        }
        Ok(())
    }

    pub fn runs_per_node(&self) -> usize {
        self.methods.len() * self.runs
    }

    /// First seed of `node`; its runs use consecutive seeds in method-major order.
    pub fn node_seed(&self, node: &GridNode) -> u64 {
        self.base_seed.wrapping_add((node.ordinal() * self.runs_per_node()) as u64)
    }

    pub fn selects(&self, node: &GridNode) -> bool {
        self.only_domain.map_or(true, |d| node.in_group(d))
            && self.only_column.map_or(true, |j| node.j == j)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub method: Method,
    pub seed: u64,
    #[serde(rename = "best_J")]
    pub best_j: f64,
    pub evals: usize,
    pub converged: bool,
}

impl From<&RunResult> for RunSummary {
    fn from(r: &RunResult) -> Self {
        Self { method: r.method, seed: r.seed, best_j: r.best_j, evals: r.evals, converged: r.converged }
    }
}

/// Best result over all runs at one node; `delta = J_hat − J_zero`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub j: usize,
    pub i: usize,
    #[serde(rename = "phi_W")]
    pub phi_w: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub segments: usize,
    pub domain: DomainLabel,
    #[serde(rename = "J_hat")]
    pub j_hat: f64,
    #[serde(rename = "J_zero")]
    pub j_zero: f64,
    pub delta: f64,
    pub best_control: Vec<f64>,
    pub method_of_best: Method,
    pub seeds: Vec<u64>,
    pub runs: Vec<RunSummary>,
}

impl SweepRecord {
    pub fn in_group(&self, label: DomainLabel) -> bool {
        super::grid::in_group(self.domain, label)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeFailure {
    pub j: usize,
    pub i: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepOutcome {
    /// Sorted by (i, j).
    pub records: Vec<SweepRecord>,
    pub failures: Vec<NodeFailure>,
}

pub fn optimize_node(node: &GridNode, cfg: &SweepConfig) -> Result<SweepRecord> {
    let problem = GateProblem::new(node.phi_w, node.segments, node.dt, SystemConfig::default())?;
    let j_zero = problem.value(&vec![0.0; node.segments]);
    let multi = multi_run(&problem, &cfg.methods, cfg.runs, cfg.node_seed(node), &cfg.optimizer)?;
    let best = multi.best();
    if !best.best_j.is_finite() {
        return Err(Error::Domain(format!("non-finite objective {}", best.best_j)));
    }
    let zero_closed = objective_at_zero(node.phi_w, node.t);
    if (j_zero - zero_closed).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "zero-control objective {j_zero} disagrees with cos²(φ_W+T) = {zero_closed}"
        )));
    }
    Ok(SweepRecord {
        j: node.j,
        i: node.i,
        phi_w: node.phi_w,
        t: node.t,
        segments: node.segments,
        domain: node.domain,
        j_hat: best.best_j,
        j_zero,
        delta: best.best_j - j_zero,
        best_control: best.best_control.amplitudes().to_vec(),
        method_of_best: best.method,
        seeds: multi.seeds(),
        runs: multi.runs.iter().map(RunSummary::from).collect(),
    })
}

/// Optimizes every selected node in the current rayon pool. Node failures are
/// collected rather than aborting; output order is (i, j) regardless of pool size.
pub fn sweep(grid: &GridSpec, cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let nodes: Vec<GridNode> = grid.nodes().into_iter().filter(|n| cfg.selects(n)).collect();
    let results: Vec<(GridNode, Result<SweepRecord>)> =
        nodes.into_par_iter().map(|n| (n, optimize_node(&n, cfg))).collect();
    let mut out = SweepOutcome::default();
    for (node, r) in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(e) => out.failures.push(NodeFailure { j: node.j, i: node.i, message: e.to_string() }),
        }
    }
    Ok(out)
}
