//! Limited-memory quasi-Newton ascent, optionally projected onto a box.

use super::{clamp_to_box, Objective, OptimizerConfig, SearchOutcome, Tracker};
use crate::rng::CounterRng;
use std::collections::VecDeque;

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct AscentSettings {
    pub max_iters: usize,
    /// Evaluations this ascent may spend, counted from its first call.
    pub max_evals: usize,
    /// Stop once the (projected) gradient satisfies `‖g‖_∞ ≤ gtol`.
    pub gtol: f64,
    /// Stop once an accepted step improves the value by at most `ftol · max(|J|, 1)`.
    pub ftol: f64,
    pub memory: usize,
    /// Box half-width; `None` is unconstrained.
    pub bound: Option<f64>,
}

impl Default for AscentSettings {
    fn default() -> Self {
        Self {
            max_iters: 1_000,
            max_evals: usize::MAX,
            gtol: 1e-10,
            ftol: 1e-14,
            memory: 10,
            bound: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Gradient,
    Stagnation,
    LineSearch,
    Iterations,
    Evaluations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: usize,
    pub stop: StopReason,
}

impl AscentOutcome {
    pub fn converged(&self) -> bool {
        matches!(self.stop, StopReason::Gradient | StopReason::Stagnation)
    }
}

/// Gradient of `−J` with the components that would leave the box zeroed.
fn projected(x: &[f64], neg_grad: &[f64], bound: Option<f64>) -> Vec<f64> {
    match bound {
        None => neg_grad.to_vec(),
        Some(nu) => x
            .iter()
            .zip(neg_grad)
            .map(|(&xi, &gi)| {
                if (xi >= nu && gi < 0.0) || (xi <= -nu && gi > 0.0) {
                    0.0
                } else {
                    gi
                }
            })
            .collect(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Two-loop recursion: returns `−H·g` for the inverse-curvature estimate `H`.
fn two_loop(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    let gamma = match pairs.back() {
        Some((s, y, _)) => dot(s, y) / dot(y, y),
        None => 1.0 / inf_norm(g).max(1.0),
    };
    for qi in q.iter_mut() {
        *qi *= gamma;
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Maximizes from `x0`, evaluating through `tracker`.
///
/// Internally minimizes `−J`. With a bound, iterates stay in `[-ν, ν]` and
/// coordinates pinned at an active face do not move.
pub fn lbfgs_ascent<O: Objective + ?Sized>(
    tracker: &mut Tracker<'_, O>,
    x0: &[f64],
    settings: &AscentSettings,
) -> AscentOutcome {
    let start_evals = tracker.evals();
    let spent = |t: &Tracker<'_, O>| t.evals() - start_evals;

    let mut x = x0.to_vec();
    if let Some(nu) = settings.bound {
        clamp_to_box(&mut x, nu);
    }
    if settings.max_evals == 0 {
        return AscentOutcome {
            x,
            value: f64::NEG_INFINITY,
            iters: 0,
            stop: StopReason::Evaluations,
        };
    }
    let (j, g) = tracker.value_and_gradient(&x);
    let mut f = -j;
    let mut grad: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(settings.memory);
    let mut iters = 0;

    let stop = loop {
        let pg = projected(&x, &grad, settings.bound);
        if inf_norm(&pg) <= settings.gtol {
            break StopReason::Gradient;
        }
        if iters >= settings.max_iters {
            break StopReason::Iterations;
        }
        if spent(tracker) >= settings.max_evals {
            break StopReason::Evaluations;
        }

        let mut d = two_loop(&pg, &pairs);
        for (di, pi) in d.iter_mut().zip(&pg) {
            if *pi == 0.0 {
                *di = 0.0;
            }
        }
        if dot(&d, &pg) >= 0.0 {
            pairs.clear();
            d = pg.iter().map(|v| -v / inf_norm(&pg).max(1.0)).collect();
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            if spent(tracker) >= settings.max_evals {
                break;
            }
            let mut trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            if let Some(nu) = settings.bound {
                clamp_to_box(&mut trial, nu);
            }
            let step: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
            let decrease = dot(&pg, &step);
            if decrease >= 0.0 {
                break;
            }
            let (jt, gt) = tracker.value_and_gradient(&trial);
            let ft = -jt;
            if ft <= f + ARMIJO_C1 * decrease {
                accepted = Some((trial, ft, gt, step));
                break;
            }
            alpha *= 0.5;
        }

        let Some((x_new, f_new, g_new, s)) = accepted else {
            if pairs.is_empty() {
                break if spent(tracker) >= settings.max_evals {
                    StopReason::Evaluations
                } else {
                    StopReason::LineSearch
                };
            }
            pairs.clear();
            iters += 1;
            continue;
        };
        iters += 1;

        let grad_new: Vec<f64> = g_new.iter().map(|v| -v).collect();
        let y: Vec<f64> = grad_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() && sy > 0.0 {
            if pairs.len() == settings.memory {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        let improvement = f - f_new;
        x = x_new;
        grad = grad_new;
        f = f_new;
        if improvement <= settings.ftol * f.abs().max(1.0) {
            break StopReason::Stagnation;
        }
    };

    AscentOutcome {
        x,
        value: -f,
        iters,
        stop,
    }
}

/// Ascent from a start drawn uniformly in `[-A, A]^K`; unconstrained unless
/// `cfg.grape_box` confines it to `[-ν, ν]^K`.
pub fn grape_maximize<O: Objective + ?Sized>(obj: &O, cfg: &OptimizerConfig) -> SearchOutcome {
    let mut rng = CounterRng::new(cfg.seed);
    let a = cfg.init_amplitude;
    let x0: Vec<f64> = (0..obj.dim()).map(|_| rng.uniform_range(-a, a)).collect();
    grape_from(obj, &x0, cfg)
}

/// Ascent from a given start.
pub fn grape_from<O: Objective + ?Sized>(obj: &O, x0: &[f64], cfg: &OptimizerConfig) -> SearchOutcome {
    let bound = cfg.grape_box.then_some(cfg.bound);
    let mut tracker = Tracker::new(obj, bound);
    let settings = AscentSettings {
        max_iters: cfg.max_iters,
        max_evals: cfg.max_evals,
        ftol: cfg.tolerance,
        bound,
        ..AscentSettings::default()
    };
    let out = lbfgs_ascent(&mut tracker, x0, &settings);
    SearchOutcome::from_tracker(tracker, out.converged())
}
