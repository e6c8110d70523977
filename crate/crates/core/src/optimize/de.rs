//! rand/1/bin differential evolution on the box `[-ν, ν]^K`.

use super::grape::{lbfgs_ascent, AscentSettings};
use super::{Objective, OptimizerConfig, SearchOutcome, Tracker};
use crate::rng::CounterRng;

/// Latin-hypercube sample of `n` points in `[-ν, ν]^dim`.
fn latin_hypercube(n: usize, dim: usize, nu: f64, rng: &mut CounterRng) -> Vec<Vec<f64>> {
    let mut pop = vec![vec![0.0; dim]; n];
    let width = 2.0 * nu / n as f64;
    for d in 0..dim {
        let mut strata: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            strata.swap(k, rng.below(k + 1));
        }
        for (member, &s) in pop.iter_mut().zip(&strata) {
            member[d] = -nu + width * (s as f64 + rng.uniform());
        }
    }
    pop
}

/// Three distinct indices in `0..n`, all different from `exclude`.
fn pick_three(n: usize, exclude: usize, rng: &mut CounterRng) -> [usize; 3] {
    let mut out = [exclude; 3];
    let mut k = 0;
    while k < 3 {
        let c = rng.below(n);
        if c != exclude && !out[..k].contains(&c) {
            out[k] = c;
            k += 1;
        }
    }
    out
}

/// Maximizes over `[-ν, ν]^K` and, if enabled, polishes the winner with the
/// box-projected ascent. Every candidate lies inside the box, and the polish
/// shares the evaluation budget.
///
/// Generations stop when the population's value spread falls to
/// `tolerance · max(|J_best|, 1)` or when all but the polish share of the
/// evaluation budget is spent.
pub fn differential_evolution<O: Objective + ?Sized>(obj: &O, cfg: &OptimizerConfig) -> SearchOutcome {
    let p = &cfg.de;
    let nu = cfg.bound;
    let dim = obj.dim();
    let mut rng = CounterRng::new(cfg.seed);
    let mut tracker = Tracker::new(obj, Some(nu));
    let generation_budget = if p.polish {
        cfg.max_evals - (p.polish_share * cfg.max_evals as f64) as usize
    } else {
        cfg.max_evals
    };

    let size = (p.pop_per_dim * dim).max(p.min_pop);
    let mut pop = latin_hypercube(size, dim, nu, &mut rng);
    let mut fitness: Vec<f64> = Vec::with_capacity(size);
    for member in &pop {
        if tracker.evals() >= cfg.max_evals {
            break;
        }
        fitness.push(tracker.value(member));
    }
    pop.truncate(fitness.len());

    let mut converged = false;
    let mut trial = vec![0.0; dim];
    if pop.len() >= 4 {
        'generations: loop {
            let (lo, hi) = fitness
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
            if hi - lo <= cfg.tolerance * hi.abs().max(1.0) {
                converged = true;
                break;
            }
            let f = rng.uniform_range(p.f_min, p.f_max);
            for i in 0..pop.len() {
                if tracker.evals() >= generation_budget {
                    break 'generations;
                }
                let [r0, r1, r2] = pick_three(pop.len(), i, &mut rng);
                let forced = rng.below(dim);
                for d in 0..dim {
                    trial[d] = if d == forced || rng.uniform() < p.crossover {
                        (pop[r0][d] + f * (pop[r1][d] - pop[r2][d])).clamp(-nu, nu)
                    } else {
                        pop[i][d]
                    };
                }
                let v = tracker.value(&trial);
                if v >= fitness[i] {
                    fitness[i] = v;
                    pop[i].copy_from_slice(&trial);
                }
            }
        }
    }

    let remaining = cfg.max_evals.saturating_sub(tracker.evals());
    if p.polish && remaining > 0 && !tracker.best_x().is_empty() {
        let start = tracker.best_x().to_vec();
        let settings = AscentSettings {
            max_iters: cfg.max_iters,
            max_evals: remaining,
            ftol: cfg.tolerance,
            bound: Some(nu),
            ..AscentSettings::default()
        };
        let out = lbfgs_ascent(&mut tracker, &start, &settings);
        converged = out.converged();
    }
    SearchOutcome::from_tracker(tracker, converged)
}
