use super::{
    differential_evolution, dual_annealing, grape::grape_maximize, Method, OptimizerConfig, RunResult,
};
use crate::dynamics::GateProblem;
use crate::error::{Error, Result};
use serde::Serialize;

/// Runs `cfg.method` on `problem` with `cfg.seed`.
pub fn run_method(problem: &GateProblem, cfg: &OptimizerConfig) -> Result<RunResult> {
    cfg.validate()?;
    let outcome = match cfg.method {
        Method::Grape => grape_maximize(problem, cfg),
        Method::De => differential_evolution(problem, cfg),
        Method::Da => dual_annealing(problem, cfg),
    };
    Ok(outcome.into_run_result(problem, cfg.method, cfg.seed))
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiRun {
    /// Index into `runs` of the highest `best_J` (earliest on ties).
    pub best_index: usize,
    pub runs: Vec<RunResult>,
}

impl MultiRun {
    pub fn best(&self) -> &RunResult {
        &self.runs[self.best_index]
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.runs.iter().map(|r| r.seed).collect()
    }
}

/// `runs_per_method` runs of every method; run `k` (method-major order) uses
/// seed `base_seed + k`. Everything except method and seed comes from `base`.
pub fn multi_run(
    problem: &GateProblem,
    methods: &[Method],
    runs_per_method: usize,
    base_seed: u64,
    base: &OptimizerConfig,
) -> Result<MultiRun> {
    if runs_per_method == 0 || methods.is_empty() {
        return Err(Error::Config("multi_run needs at least one method and one run".into()));
    }
    let mut runs = Vec::with_capacity(methods.len() * runs_per_method);
    for (m, &method) in methods.iter().enumerate() {
        for r in 0..runs_per_method {
            let seed = base_seed.wrapping_add((m * runs_per_method + r) as u64);
            let cfg = base.clone().with_method(method).with_seed(seed);
            runs.push(run_method(problem, &cfg)?);
        }
    }
    let best_index = runs
        .iter()
        .enumerate()
        .fold(0, |b, (k, r)| if r.best_j > runs[b].best_j { k } else { b });
    Ok(MultiRun { best_index, runs })
}
