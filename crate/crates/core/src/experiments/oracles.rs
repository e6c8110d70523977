//! Randomized derivative checks over grid nodes.

use super::grid::{build_grid, GridNode};
use crate::dynamics::{analytic_gradient, finite_difference_gradient, make_phase_gate, GateProblem, SystemConfig};
use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::spectral::{quadratic_form_piecewise, LandscapePoint};
use serde::Serialize;

/// Central-difference step for gradients.
pub const FD_STEP: f64 = 1e-5;
/// Amplitudes of random controls are uniform in `[−A, A]`.
pub const CONTROL_AMPLITUDE: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub j: usize,
    pub i: usize,
    pub value: f64,
}

impl WorstCase {
    fn none() -> Self {
        Self { j: 0, i: 0, value: 0.0 }
    }

    /// The first node seen always replaces the placeholder (`i = 0` is off-grid).
    fn update(&mut self, n: &GridNode, value: f64) {
        if self.i == 0 || value > self.value || value.is_nan() {
            *self = Self { j: n.j, i: n.i, value };
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientCheck {
    pub samples: usize,
    /// `max ‖g − g_fd‖∞ / ‖g_fd‖∞` over random (node, control) pairs.
    pub worst_relative: WorstCase,
    /// `max ‖∇J(0)‖∞` over all 110 nodes.
    pub zero_gradient: WorstCase,
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianCheck {
    pub directions: usize,
    /// `max |Q − D²J| / |D²J|` with `Q` the cellwise-exact quadratic form.
    pub worst_relative: WorstCase,
}

fn node_problem(n: &GridNode) -> Result<GateProblem> {
    GateProblem::new(n.phi_w, n.segments, n.dt, SystemConfig::default())
}

pub fn gradient_check(samples: usize, seed: u64) -> Result<GradientCheck> {
    if samples == 0 {
        return Err(Error::Config("gradient check needs at least one sample".into()));
    }
    let nodes = build_grid().nodes();
    let cfg = SystemConfig::default();
    let mut rng = CounterRng::new(seed);
    let mut worst = WorstCase::none();
    for _ in 0..samples {
        let n = nodes[rng.below(nodes.len())];
        let problem = node_problem(&n)?;
        let amps: Vec<f64> =
            (0..n.segments).map(|_| rng.uniform_range(-CONTROL_AMPLITUDE, CONTROL_AMPLITUDE)).collect();
        let ctrl = problem.control(&amps)?;
        let w = make_phase_gate(n.phi_w)?;
        let g = analytic_gradient(&ctrl, &w, &cfg);
        let fd = finite_difference_gradient(&ctrl, &w, &cfg, FD_STEP)?;
        let scale = fd.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        let diff = g.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst.update(&n, diff / scale);
    }
    let mut zero = WorstCase::none();
    for n in &nodes {
        let (_, g) = node_problem(n)?.value_and_gradient(&vec![0.0; n.segments]);
        zero.update(n, g.iter().fold(0.0, |m, x| m.max(x.abs())));
    }
    Ok(GradientCheck { samples, worst_relative: worst, zero_gradient: zero })
}

/// Richardson-extrapolated second directional difference of `J` at the zero control.
pub fn second_directional_derivative(problem: &GateProblem, d: &[f64]) -> f64 {
    let zero = problem.value(&vec![0.0; d.len()]);
    let sd = |eps: f64| {
        let plus: Vec<f64> = d.iter().map(|x| eps * x).collect();
        let minus: Vec<f64> = d.iter().map(|x| -eps * x).collect();
        (problem.value(&plus) - 2.0 * zero + problem.value(&minus)) / (eps * eps)
    };
    (4.0 * sd(5e-3) - sd(1e-2)) / 3.0
}

pub fn hessian_check(directions: usize, seed: u64) -> Result<HessianCheck> {
    if directions == 0 {
        return Err(Error::Config("Hessian check needs at least one direction".into()));
    }
    let nodes = build_grid().nodes();
    let mut rng = CounterRng::new(seed);
    let mut worst = WorstCase::none();
    for _ in 0..directions {
        let n = nodes[rng.below(nodes.len())];
        let problem = node_problem(&n)?;
        let p = LandscapePoint::new(n.phi_w, n.t)?;
        let d: Vec<f64> = (0..n.segments).map(|_| rng.uniform_range(-1.0, 1.0)).collect();
        let q = quadratic_form_piecewise(&d, n.dt, &p)?;
        let fd = second_directional_derivative(&problem, &d);
        worst.update(&n, (q - fd).abs() / fd.abs());
    }
    Ok(HessianCheck { directions, worst_relative: worst })
}
