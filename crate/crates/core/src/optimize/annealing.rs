//! Generalized simulated annealing with gradient polishing ("dual annealing").
//!
//! Energies are `E = −J`. Visiting steps follow the Tsallis distribution with
//! parameter `q_v`; uphill moves are accepted with the generalized Metropolis
//! rule of parameter `q_a`.

use super::grape::{lbfgs_ascent, AscentSettings};
use super::{DaParams, Objective, OptimizerConfig, SearchOutcome, Tracker};
use crate::rng::CounterRng;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

const TAIL_LIMIT: f64 = 1e8;
const MIN_VISIT_BOUND: f64 = 1e-10;

struct Visiting {
    qv: f64,
    nu: f64,
    factor4_p: f64,
    factor6: f64,
}

impl Visiting {
    fn new(qv: f64, nu: f64) -> Self {
        let factor2 = ((4.0 - qv) * (qv - 1.0).ln()).exp();
        let factor3 = ((2.0 - qv) * 2f64.ln() / (qv - 1.0)).exp();
        let factor4_p = PI.sqrt() * factor2 / (factor3 * (3.0 - qv));
        let factor5 = 1.0 / (qv - 1.0) - 0.5;
        let d1 = 2.0 - factor5;
        let factor6 = PI * (1.0 - factor5) / (PI * (1.0 - factor5)).sin() / ln_gamma(d1).exp();
        Self {
            qv,
            nu,
            factor4_p,
            factor6,
        }
    }

    /// One Tsallis-distributed step at `temperature`.
    fn draw(&self, temperature: f64, rng: &mut CounterRng) -> f64 {
        let x = rng.normal();
        let y = rng.normal();
        let q = self.qv;
        let factor1 = (temperature.ln() / (q - 1.0)).exp();
        let factor4 = self.factor4_p * factor1;
        let sigma = (-(q - 1.0) * (self.factor6 / factor4).ln() / (3.0 - q)).exp();
        let den = ((q - 1.0) * y.abs().ln() / (3.0 - q)).exp();
        x * sigma / den
    }

    /// Moves `x_i + step` back into `[-ν, ν]` by periodic wrapping.
    fn wrap(&self, value: f64) -> f64 {
        let range = 2.0 * self.nu;
        let a = value + self.nu;
        let b = a % range + range;
        let mut out = b % range - self.nu;
        if (out + self.nu).abs() < MIN_VISIT_BOUND {
            out += MIN_VISIT_BOUND;
        }
        out
    }

    /// Steps `0..dim` move every coordinate; step `dim + k` moves coordinate `k` only.
    fn visit(&self, x: &[f64], step: usize, temperature: f64, rng: &mut CounterRng) -> Vec<f64> {
        let dim = x.len();
        let mut out = x.to_vec();
        if step < dim {
            let steps: Vec<f64> = (0..dim).map(|_| self.draw(temperature, rng)).collect();
            let upper = rng.uniform();
            let lower = rng.uniform();
            for (o, mut s) in out.iter_mut().zip(steps) {
                if s > TAIL_LIMIT {
                    s = TAIL_LIMIT * upper;
                } else if s < -TAIL_LIMIT {
                    s = -TAIL_LIMIT * lower;
                }
                *o = self.wrap(*o + s);
            }
        } else {
            let mut s = self.draw(temperature, rng);
            if s > TAIL_LIMIT {
                s = TAIL_LIMIT * rng.uniform();
            } else if s < -TAIL_LIMIT {
                s = -TAIL_LIMIT * rng.uniform();
            }
            let k = step - dim;
            out[k] = self.wrap(out[k] + s);
        }
        out
    }
}

struct State {
    x: Vec<f64>,
    e: f64,
    best_x: Vec<f64>,
    best_e: f64,
}

struct Chain {
    emin: f64,
    xmin: Vec<f64>,
    not_improved: usize,
    not_improved_max: usize,
    temperature_step: f64,
    improved: bool,
    k: f64,
}

enum Halt {
    Budget,
}

struct Annealer<'t, 'o, O: Objective + ?Sized> {
    tracker: &'t mut Tracker<'o, O>,
    rng: CounterRng,
    visiting: Visiting,
    params: DaParams,
    nu: f64,
    max_evals: usize,
    local: AscentSettings,
}

impl<O: Objective + ?Sized> Annealer<'_, '_, O> {
    fn energy(&mut self, x: &[f64]) -> f64 {
        -self.tracker.value(x)
    }

    fn budget_left(&self) -> bool {
        self.tracker.evals() < self.max_evals
    }

    fn random_point(&mut self) -> Vec<f64> {
        let dim = self.tracker.objective().dim();
        (0..dim).map(|_| self.rng.uniform_range(-self.nu, self.nu)).collect()
    }

    fn polish(&mut self, x: &[f64], e: f64) -> (f64, Vec<f64>) {
        let remaining = self.max_evals.saturating_sub(self.tracker.evals());
        let settings = AscentSettings {
            max_evals: remaining,
            ..self.local.clone()
        };
        let out = lbfgs_ascent(self.tracker, x, &settings);
        let e_new = -out.value;
        if e_new.is_finite() && e_new < e {
            (e_new, out.x)
        } else {
            (e, x.to_vec())
        }
    }

    fn accept_reject(&mut self, j: usize, e: f64, x_visit: Vec<f64>, st: &mut State, ch: &mut Chain) {
        let r = self.rng.uniform();
        let qa = self.params.accept;
        let base = 1.0 - (1.0 - qa) * (e - st.e) / ch.temperature_step;
        let p = if base <= 0.0 {
            0.0
        } else {
            (base.ln() / (1.0 - qa)).exp()
        };
        if r <= p {
            st.x = x_visit;
            st.e = e;
            ch.xmin = st.x.clone();
        }
        if ch.not_improved >= ch.not_improved_max && (j == 0 || st.e < ch.emin) {
            ch.emin = st.e;
            ch.xmin = st.x.clone();
        }
    }

    fn run_chain(&mut self, step: usize, temperature: f64, st: &mut State, ch: &mut Chain) -> Result<(), Halt> {
        ch.temperature_step = temperature / (step as f64 + 1.0);
        ch.not_improved += 1;
        let dim = st.x.len();
        for j in 0..2 * dim {
            if j == 0 {
                ch.improved = step == 0;
            }
            let x_visit = self.visiting.visit(&st.x, j, temperature, &mut self.rng);
            let e = self.energy(&x_visit);
            if e < st.e {
                st.x = x_visit;
                st.e = e;
                if e < st.best_e {
                    st.best_e = e;
                    st.best_x = st.x.clone();
                    ch.improved = true;
                    ch.not_improved = 0;
                }
            } else {
                self.accept_reject(j, e, x_visit, st, ch);
            }
            if !self.budget_left() {
                return Err(Halt::Budget);
            }
        }
        Ok(())
    }

    fn local_search(&mut self, st: &mut State, ch: &mut Chain) -> Result<(), Halt> {
        if ch.improved {
            let (e, x) = self.polish(&st.best_x.clone(), st.best_e);
            if e < st.best_e {
                ch.not_improved = 0;
                st.best_e = e;
                st.best_x = x.clone();
                st.x = x;
                st.e = e;
            }
            if !self.budget_left() {
                return Err(Halt::Budget);
            }
        }
        let dim = st.x.len();
        let mut do_ls = false;
        if ch.k < 90.0 * dim as f64 {
            let pls = (ch.k * (st.best_e - st.e) / ch.temperature_step).exp();
            if pls >= self.rng.uniform() {
                do_ls = true;
            }
        }
        if ch.not_improved >= ch.not_improved_max {
            do_ls = true;
        }
        if do_ls {
            let (e, x) = self.polish(&ch.xmin.clone(), ch.emin);
            ch.xmin = x.clone();
            ch.emin = e;
            ch.not_improved = 0;
            ch.not_improved_max = dim;
            if e < st.best_e {
                st.best_e = e;
                st.best_x = x.clone();
                st.x = x;
                st.e = e;
            }
            if !self.budget_left() {
                return Err(Halt::Budget);
            }
        }
        Ok(())
    }
}

/// Maximizes over `[-ν, ν]^K`. Every candidate lies inside the box.
///
/// `converged` is true when the iteration schedule completes within the
/// evaluation budget.
pub fn dual_annealing<O: Objective + ?Sized>(obj: &O, cfg: &OptimizerConfig) -> SearchOutcome {
    let nu = cfg.bound;
    let params = cfg.da.clone();
    let dim = obj.dim();
    let mut tracker = Tracker::new(obj, Some(nu));
    let mut an = Annealer {
        rng: CounterRng::new(cfg.seed),
        visiting: Visiting::new(params.visit, nu),
        local: AscentSettings {
            max_iters: (6 * dim).max(100).min(1000),
            ftol: cfg.tolerance,
            bound: Some(nu),
            ..AscentSettings::default()
        },
        params,
        nu,
        max_evals: cfg.max_evals,
        tracker: &mut tracker,
    };

    let x0 = an.random_point();
    let e0 = an.energy(&x0);
    let mut st = State {
        x: x0.clone(),
        e: e0,
        best_x: x0.clone(),
        best_e: e0,
    };
    let mut ch = Chain {
        emin: e0,
        xmin: x0,
        not_improved: 0,
        not_improved_max: 1000,
        temperature_step: 0.0,
        improved: false,
        k: 100.0 * dim as f64,
    };

    let qv = an.params.visit;
    let t0 = an.params.initial_temp;
    let t_restart = t0 * an.params.restart_temp_ratio;
    let t1 = ((qv - 1.0) * 2f64.ln()).exp() - 1.0;
    let mut iteration = 0;
    let mut converged = an.budget_left();
    'outer: while converged {
        for i in 0..an.params.max_iter {
            let t2 = ((qv - 1.0) * (i as f64 + 2.0).ln()).exp() - 1.0;
            let temperature = t0 * t1 / t2;
            if iteration >= an.params.max_iter {
                break 'outer;
            }
            if temperature < t_restart {
                st.x = an.random_point();
                st.e = an.energy(&st.x.clone());
                if st.e < st.best_e {
                    st.best_e = st.e;
                    st.best_x = st.x.clone();
                }
                if !an.budget_left() {
                    converged = false;
                }
                break;
            }
            if an.run_chain(i, temperature, &mut st, &mut ch).is_err() {
                converged = false;
                break 'outer;
            }
            if an.params.local_search && an.local_search(&mut st, &mut ch).is_err() {
                converged = false;
                break 'outer;
            }
            iteration += 1;
        }
    }
    SearchOutcome::from_tracker(tracker, converged)
}
