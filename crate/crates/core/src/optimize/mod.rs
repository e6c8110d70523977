//! Maximizers over piecewise-constant control amplitudes.
//!
//! All three methods maximize an [`Objective`]; they share the eval
//! bookkeeping in [`Tracker`] so traces and eval counts mean the same thing
//! everywhere. One objective evaluation (with or without gradient) counts as
//! one eval.

mod annealing;
mod config;
mod de;
mod grape;
mod multi;

pub use annealing::dual_annealing;
pub use config::{DaParams, DeParams, Method, OptimizerConfig};
pub use de::differential_evolution;
pub use grape::{grape_maximize, lbfgs_ascent, AscentOutcome, AscentSettings};
pub use multi::{multi_run, run_method, MultiRun};

use crate::dynamics::{GateProblem, PiecewiseControl};
use serde::Serialize;

/// A smooth function to maximize.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>);
}

impl Objective for GateProblem {
    fn dim(&self) -> usize {
        self.segments()
    }

    fn value(&self, x: &[f64]) -> f64 {
        GateProblem::value(self, x)
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        GateProblem::value_and_gradient(self, x)
    }
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub method: Method,
    pub seed: u64,
    pub best_control: PiecewiseControl,
    #[serde(rename = "best_J")]
    pub best_j: f64,
    pub evals: usize,
    pub converged: bool,
    /// `(eval_count, best_J_so_far)` at every improvement.
    pub trace: Vec<(usize, f64)>,
}

impl RunResult {
    /// The trace thinned to at most `max_points`, always keeping the last point.
    pub fn downsampled_trace(&self, max_points: usize) -> Vec<(usize, f64)> {
        let n = self.trace.len();
        if n <= max_points || max_points < 2 {
            return self.trace.clone();
        }
        let mut out: Vec<(usize, f64)> = (0..max_points - 1)
            .map(|k| self.trace[k * (n - 1) / (max_points - 1)])
            .collect();
        out.push(self.trace[n - 1]);
        out
    }
}

/// Eval counter and best-so-far record wrapped around an objective.
pub struct Tracker<'a, O: Objective + ?Sized> {
    obj: &'a O,
    evals: usize,
    best_x: Vec<f64>,
    best_value: f64,
    trace: Vec<(usize, f64)>,
    bound: Option<f64>,
    bound_violations: usize,
}

impl<'a, O: Objective + ?Sized> Tracker<'a, O> {
    pub fn new(obj: &'a O, bound: Option<f64>) -> Self {
        Self {
            obj,
            evals: 0,
            best_x: Vec::new(),
            best_value: f64::NEG_INFINITY,
            trace: Vec::new(),
            bound,
            bound_violations: 0,
        }
    }

    pub fn objective(&self) -> &O {
        self.obj
    }

    pub fn evals(&self) -> usize {
        self.evals
    }

    pub fn best_value(&self) -> f64 {
        self.best_value
    }

    pub fn best_x(&self) -> &[f64] {
        &self.best_x
    }

    /// Candidates evaluated outside `[-ν, ν]`; always zero for the box methods.
    pub fn bound_violations(&self) -> usize {
        self.bound_violations
    }

    fn record(&mut self, x: &[f64], value: f64) {
        self.evals += 1;
        if let Some(nu) = self.bound {
            if x.iter().any(|a| a.abs() > nu) {
                self.bound_violations += 1;
            }
        }
        if value > self.best_value {
            self.best_value = value;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
            self.trace.push((self.evals, value));
        }
    }

    pub fn value(&mut self, x: &[f64]) -> f64 {
        let v = self.obj.value(x);
        self.record(x, v);
        v
    }

    pub fn value_and_gradient(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        let (v, g) = self.obj.value_and_gradient(x);
        self.record(x, v);
        (v, g)
    }

    pub fn into_parts(self) -> (Vec<f64>, f64, usize, Vec<(usize, f64)>) {
        (self.best_x, self.best_value, self.evals, self.trace)
    }
}

pub(crate) fn clamp_to_box(x: &mut [f64], nu: f64) {
    for a in x.iter_mut() {
        *a = a.clamp(-nu, nu);
    }
}

/// Raw result of one maximization over an arbitrary [`Objective`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
    pub trace: Vec<(usize, f64)>,
    /// Candidates evaluated outside the box; zero for DE and DA.
    pub bound_violations: usize,
}

impl SearchOutcome {
    pub(crate) fn from_tracker<O: Objective + ?Sized>(tracker: Tracker<'_, O>, converged: bool) -> Self {
        let bound_violations = tracker.bound_violations();
        let (x, value, evals, trace) = tracker.into_parts();
        Self {
            x,
            value,
            evals,
            converged,
            trace,
            bound_violations,
        }
    }

    /// Packs the outcome into a [`RunResult`], recomputing `best_J` from the control.
    pub fn into_run_result(self, problem: &GateProblem, method: Method, seed: u64) -> RunResult {
        let best_j = problem.value(&self.x);
        debug_assert!(best_j <= 1.0);
        RunResult {
            method,
            seed,
            best_control: problem
                .control(&self.x)
                .expect("optimizers only produce finite amplitudes"),
            best_j,
            evals: self.evals,
            converged: self.converged,
            trace: self.trace,
        }
    }
}

#[cfg(test)]
pub(crate) mod test_functions {
    use super::Objective;

    /// `−Σ x_i²`, maximum 0 at the origin.
    pub struct NegSphere(pub usize);

    impl Objective for NegSphere {
        fn dim(&self) -> usize {
            self.0
        }
        fn value(&self, x: &[f64]) -> f64 {
            -x.iter().map(|v| v * v).sum::<f64>()
        }
        fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
            (self.value(x), x.iter().map(|v| -2.0 * v).collect())
        }
    }

    /// Negated Rastrigin, maximum 0 at the origin.
    pub struct NegRastrigin(pub usize);

    impl Objective for NegRastrigin {
        fn dim(&self) -> usize {
            self.0
        }
        fn value(&self, x: &[f64]) -> f64 {
            let tau = std::f64::consts::TAU;
            -(10.0 * x.len() as f64
                + x.iter().map(|v| v * v - 10.0 * (tau * v).cos()).sum::<f64>())
        }
        fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
            let tau = std::f64::consts::TAU;
            let g = x.iter().map(|v| -(2.0 * v + 10.0 * tau * (tau * v).sin())).collect();
            (self.value(x), g)
        }
    }

    /// Negated Rosenbrock, maximum 0 at (1, …, 1).
    pub struct NegRosenbrock(pub usize);

    impl Objective for NegRosenbrock {
        fn dim(&self) -> usize {
            self.0
        }
        fn value(&self, x: &[f64]) -> f64 {
            -x.windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum::<f64>()
        }
        fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
            let n = x.len();
            let mut g = vec![0.0; n];
            for i in 0..n - 1 {
                let t = x[i + 1] - x[i] * x[i];
                g[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
                g[i + 1] += 200.0 * t;
            }
            (self.value(x), g.into_iter().map(|v| -v).collect())
        }
    }
}
