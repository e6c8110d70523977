//! Gate fidelity `J = ¼|Tr(W†U_T)|²` and its derivatives.

use super::matrix::Mat2;
use super::propagator::{
    propagate, propagate_to, propagate_total, segment_propagator, segment_propagator_derivative,
    PhaseGate, PiecewiseControl, SystemConfig,
};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// `¼|Tr(W†U)|²`, clamped to `[0, 1]` against rounding.
pub fn objective(w: &Mat2, u: &Mat2) -> f64 {
    fidelity_from_trace(w.dagger().trace_product(u))
}

#[inline]
pub fn fidelity_from_trace(tr: Complex64) -> f64 {
    (0.25 * tr.norm_sqr()).min(1.0)
}

/// Objective at the zero control: `cos²(φ_W + T)`.
pub fn objective_at_zero(phi_w: f64, t: f64) -> f64 {
    (phi_w + t).cos().powi(2)
}

/// A fixed gate, step size and segment count: the finite-dimensional
/// problem the optimizers work on.
#[derive(Debug, Clone)]
pub struct GateProblem {
    gate: PhaseGate,
    w_dagger: Mat2,
    segments: usize,
    dt: f64,
    cfg: SystemConfig,
}

impl GateProblem {
    pub fn new(phi_w: f64, segments: usize, dt: f64, cfg: SystemConfig) -> Result<Self> {
        let gate = PhaseGate::new(phi_w)?;
        if segments == 0 {
            return Err(Error::Domain("segment count must be at least 1".into()));
        }
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        Ok(Self {
            gate,
            w_dagger: gate.matrix().dagger(),
            segments,
            dt,
            cfg,
        })
    }

    /// Problem with `segments` equal steps spanning total time `t`.
    pub fn with_total_time(phi_w: f64, t: f64, segments: usize, cfg: SystemConfig) -> Result<Self> {
        Self::new(phi_w, segments, t / segments as f64, cfg)
    }

    pub fn phi_w(&self) -> f64 {
        self.gate.phi_w()
    }

    pub fn segments(&self) -> usize {
        self.segments
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn total_time(&self) -> f64 {
        self.segments as f64 * self.dt
    }

    pub fn system(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn gate(&self) -> Mat2 {
        self.gate.matrix()
    }

    pub fn control(&self, amplitudes: &[f64]) -> Result<PiecewiseControl> {
        PiecewiseControl::new(amplitudes.to_vec(), self.dt)
    }

    pub fn value(&self, amplitudes: &[f64]) -> f64 {
        debug_assert_eq!(amplitudes.len(), self.segments);
        let u = propagate_total(amplitudes, self.dt, &self.cfg);
        fidelity_from_trace(self.w_dagger.trace_product(&u))
    }

    /// Objective and exact gradient in one forward and one backward pass.
    pub fn value_and_gradient(&self, amplitudes: &[f64]) -> (f64, Vec<f64>) {
        let k = amplitudes.len();
        debug_assert_eq!(k, self.segments);
        let mut prefix = Vec::with_capacity(k);
        let mut segs = Vec::with_capacity(k);
        let mut acc = Mat2::identity();
        for &a in amplitudes {
            prefix.push(acc);
            let u = segment_propagator(a, self.dt, &self.cfg);
            acc = u * acc;
            segs.push(u);
        }
        let z = self.w_dagger.trace_product(&acc);
        let mut grad = vec![0.0; k];
        // suffix = W† U_K ⋯ U_{k+1}
        let mut suffix = self.w_dagger;
        for idx in (0..k).rev() {
            let du = segment_propagator_derivative(amplitudes[idx], self.dt, &self.cfg);
            let dz = (prefix[idx] * suffix).trace_product(&du);
            grad[idx] = 0.5 * (z.conj() * dz).re;
            suffix = suffix * segs[idx];
        }
        (fidelity_from_trace(z), grad)
    }
}

/// `∂J/∂a_k` for every segment, via the closed-form segment derivative.
pub fn analytic_gradient(ctrl: &PiecewiseControl, w: &Mat2, cfg: &SystemConfig) -> Vec<f64> {
    let prop = propagate(ctrl, cfg);
    let z = w.dagger().trace_product(&prop.total());
    let k = ctrl.segments();
    let mut grad = vec![0.0; k];
    let mut suffix = w.dagger();
    for idx in (0..k).rev() {
        let prefix = if idx == 0 { Mat2::identity() } else { prop.cumulative[idx - 1] };
        let du = segment_propagator_derivative(ctrl.amplitudes()[idx], ctrl.dt(), cfg);
        grad[idx] = 0.5 * (z.conj() * (prefix * suffix).trace_product(&du)).re;
        suffix = suffix * prop.segments[idx];
    }
    grad
}

/// Central differences `(f(x + h e_k) − f(x − h e_k)) / 2h`.
pub fn central_difference<F>(f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + h;
            let up = f(&probe);
            probe[k] = x[k] - h;
            let down = f(&probe);
            probe[k] = x[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

pub fn finite_difference_gradient(
    ctrl: &PiecewiseControl,
    w: &Mat2,
    cfg: &SystemConfig,
    h: f64,
) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("difference step must be positive, got {h}")));
    }
    let wd = w.dagger();
    let dt = ctrl.dt();
    Ok(central_difference(
        |a| fidelity_from_trace(wd.trace_product(&propagate_total(a, dt, cfg))),
        ctrl.amplitudes(),
        h,
    ))
}

/// Functional-derivative kernel `½ Im(conj(Tr Y) · Tr(Y V_t))` with
/// `Y = W†U_T` and `V_t = U_t† V U_t`.
pub fn gradient_kernel(t: f64, ctrl: &PiecewiseControl, w: &Mat2, cfg: &SystemConfig) -> Result<f64> {
    let u_t = propagate_to(ctrl, cfg, t)?;
    let y = w.dagger() * propagate(ctrl, cfg).total();
    let v_t = u_t.dagger() * cfg.interaction() * u_t;
    Ok(0.5 * (y.trace().conj() * y.trace_product(&v_t)).im)
}
