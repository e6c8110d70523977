//! Closed-form propagation of piecewise-constant controls.
//!
//! The Hamiltonian during a segment with amplitude `a` is `σz + a·V` with
//! `V = vx·σx + vy·σy`. Writing it as `n·σ` with `|n| = √(1 + a²v²)`,
//!
//! ```text
//! exp(−i (σz + aV) dt) = cos α · I − i dt sinc α · (σz + aV),   α = dt·√(1 + a²v²)
//! ```

use super::matrix::{Mat2, I, ONE, ZERO};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Interaction `V = vx·σx + vy·σy`; the drift is fixed to `H0 = σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    v_x: f64,
    v_y: f64,
}

impl SystemConfig {
    pub fn new(v_x: f64, v_y: f64) -> Result<Self> {
        if !(v_x.is_finite() && v_y.is_finite()) || v_x * v_x + v_y * v_y <= 0.0 {
            return Err(Error::Domain(format!(
                "interaction must be nonzero and finite, got vx = {v_x}, vy = {v_y}"
            )));
        }
        Ok(Self { v_x, v_y })
    }

    /// `V = v(cos θ σx + sin θ σy)`.
    pub fn from_polar(v: f64, theta: f64) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("coupling v must be positive, got {v}")));
        }
        Self::new(v * theta.cos(), v * theta.sin())
    }

    pub fn v_x(&self) -> f64 {
        self.v_x
    }

    pub fn v_y(&self) -> f64 {
        self.v_y
    }

    pub fn v(&self) -> f64 {
        self.v_x.hypot(self.v_y)
    }

    pub fn theta(&self) -> f64 {
        self.v_y.atan2(self.v_x)
    }

    pub fn drift(&self) -> Mat2 {
        Mat2::sigma_z()
    }

    pub fn interaction(&self) -> Mat2 {
        Mat2::from_pauli(ZERO, self.v_x.into(), self.v_y.into(), ZERO)
    }

    /// `σz + a·V`.
    pub fn hamiltonian(&self, a: f64) -> Mat2 {
        Mat2::from_pauli(ZERO, (a * self.v_x).into(), (a * self.v_y).into(), ONE)
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self { v_x: 1.0, v_y: 0.0 }
    }
}

/// Amplitudes `a_1..a_K` held for a uniform step `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseControl {
    amplitudes: Vec<f64>,
    dt: f64,
}

impl PiecewiseControl {
    pub fn new(amplitudes: Vec<f64>, dt: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("a control needs at least one segment".into()));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(Error::Domain("control amplitudes must be finite".into()));
        }
        Ok(Self { amplitudes, dt })
    }

    pub fn zeros(segments: usize, dt: f64) -> Result<Self> {
        Self::new(vec![0.0; segments], dt)
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn segments(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn total_time(&self) -> f64 {
        self.amplitudes.len() as f64 * self.dt
    }

    /// Segment holding time `t`; the final instant belongs to the last segment.
    pub fn segment_at(&self, t: f64) -> usize {
        ((t / self.dt).floor().max(0.0) as usize).min(self.segments() - 1)
    }

    pub fn with_amplitudes(&self, amplitudes: Vec<f64>) -> Result<Self> {
        Self::new(amplitudes, self.dt)
    }
}

/// Phase-shift target `W = exp(iφ_W σz)` with `φ_W ∈ (0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGate {
    phi_w: f64,
}

impl PhaseGate {
    pub fn new(phi_w: f64) -> Result<Self> {
        if !(phi_w > 0.0 && phi_w <= PI + 1e-12) {
            return Err(Error::Domain(format!("gate phase must lie in (0, π], got {phi_w}")));
        }
        Ok(Self { phi_w })
    }

    pub fn phi_w(&self) -> f64 {
        self.phi_w
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::diag(Complex64::from_polar(1.0, self.phi_w), Complex64::from_polar(1.0, -self.phi_w))
    }
}

/// `diag(e^{iφ_W}, e^{−iφ_W})`.
pub fn make_phase_gate(phi_w: f64) -> Result<Mat2> {
    PhaseGate::new(phi_w).map(|g| g.matrix())
}

const SINC_TAYLOR_CUTOFF: f64 = 1e-4;

/// `sin x / x` with a Taylor branch near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sinc'(x) / x = (x cos x − sin x) / x³`.
fn sinc_slope_over_x(x: f64) -> f64 {
    if x.abs() < 1e-2 {
        let x2 = x * x;
        -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0 + x2 * x2 * x2 / 45360.0
    } else {
        (x * x.cos() - x.sin()) / (x * x * x)
    }
}

/// `α = dt·√(1 + a²v²)`.
pub fn rotation_angle(a: f64, dt: f64, cfg: &SystemConfig) -> f64 {
    let v = cfg.v();
    dt * (1.0 + a * a * v * v).sqrt()
}

/// `exp(−i(σz + aV)dt)` in closed form.
pub fn segment_propagator(a: f64, dt: f64, cfg: &SystemConfig) -> Mat2 {
    let alpha = rotation_angle(a, dt, cfg);
    let c = alpha.cos();
    let s = dt * sinc(alpha);
    // c·I − i s (a vx σx + a vy σy + σz)
    Mat2::from_pauli(
        c.into(),
        -I * (s * a * cfg.v_x()),
        -I * (s * a * cfg.v_y()),
        -I * s,
    )
}

/// Derivative of [`segment_propagator`] with respect to the amplitude.
pub fn segment_propagator_derivative(a: f64, dt: f64, cfg: &SystemConfig) -> Mat2 {
    let v2 = cfg.v() * cfg.v();
    let alpha = rotation_angle(a, dt, cfg);
    let sc = sinc(alpha);
    // dα/da = dt² a v² / α, so −sin α · dα/da = −dt² a v² sinc α.
    let d_cos = -dt * dt * a * v2 * sc;
    // d(dt sinc α)/da = dt · sinc'(α) · dα/da = dt³ a v² · sinc'(α)/α
    let d_s = dt * dt * dt * a * v2 * sinc_slope_over_x(alpha);
    let s = dt * sc;
    // d/da [c I − i s (σz + aV)] = c' I − i s' (σz + aV) − i s V
    Mat2::from_pauli(
        d_cos.into(),
        -I * (d_s * a * cfg.v_x() + s * cfg.v_x()),
        -I * (d_s * a * cfg.v_y() + s * cfg.v_y()),
        -I * d_s,
    )
}

/// Segment propagators and their running products.
#[derive(Debug, Clone)]
pub struct Propagation {
    /// `U_k` for each segment.
    pub segments: Vec<Mat2>,
    /// `U_k ⋯ U_1` after each segment; the last entry is `U_T`.
    pub cumulative: Vec<Mat2>,
}

impl Propagation {
    pub fn total(&self) -> Mat2 {
        *self.cumulative.last().expect("controls have at least one segment")
    }
}

/// `U_T = U_K ⋯ U_1` (last segment leftmost).
pub fn propagate(ctrl: &PiecewiseControl, cfg: &SystemConfig) -> Propagation {
    let dt = ctrl.dt();
    let segments: Vec<Mat2> = ctrl
        .amplitudes()
        .iter()
        .map(|&a| segment_propagator(a, dt, cfg))
        .collect();
    let mut cumulative = Vec::with_capacity(segments.len());
    let mut acc = Mat2::identity();
    for u in &segments {
        acc = *u * acc;
        cumulative.push(acc);
    }
    Propagation { segments, cumulative }
}

/// Total propagator only, without storing intermediates.
pub fn propagate_total(amplitudes: &[f64], dt: f64, cfg: &SystemConfig) -> Mat2 {
    amplitudes
        .iter()
        .fold(Mat2::identity(), |acc, &a| segment_propagator(a, dt, cfg) * acc)
}

/// `U_t` for `t ∈ [0, T]`, splitting the segment that contains `t`.
pub fn propagate_to(ctrl: &PiecewiseControl, cfg: &SystemConfig, t: f64) -> Result<Mat2> {
    let total = ctrl.total_time();
    if !(0.0..=total * (1.0 + 1e-14)).contains(&t) {
        return Err(Error::Domain(format!("time {t} outside [0, {total}]")));
    }
    let dt = ctrl.dt();
    let mut acc = Mat2::identity();
    let mut elapsed = 0.0;
    for (k, &a) in ctrl.amplitudes().iter().enumerate() {
        let end = (k + 1) as f64 * dt;
        if t >= end {
            acc = segment_propagator(a, dt, cfg) * acc;
            elapsed = end;
        } else {
            let rest = t - elapsed;
            if rest > 0.0 {
                acc = segment_propagator(a, rest, cfg) * acc;
            }
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scaled-and-squared Taylor series for exp(M): 16 terms after scaling
    /// the argument below 1/2.
    fn expm_series(m: Mat2) -> Mat2 {
        let norm = m.max_abs() * 2.0;
        let mut squarings = 0;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        let x = m.scale_re(scale);
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for n in 1..=16 {
            term = (term * x).scale_re(1.0 / n as f64);
            sum = sum + term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    fn oracle(a: f64, dt: f64, cfg: &SystemConfig) -> Mat2 {
        expm_series(cfg.hamiltonian(a).scale(-I * dt))
    }

    #[test]
    fn phase_gate_special_values() {
        let w = make_phase_gate(PI).unwrap();
        assert!((w - Mat2::identity().scale_re(-1.0)).max_abs() < 1e-15);
        let w = make_phase_gate(PI / 2.0).unwrap();
        assert!((w - Mat2::diag(I, -I)).max_abs() < 1e-15);
        let w = make_phase_gate(3.0 * PI / 5.0).unwrap();
        assert!(w.unitarity_defect() <= 1e-15);
        assert!((w.get(0, 0) - Complex64::from_polar(1.0, 3.0 * PI / 5.0)).norm() < 1e-16);
    }

    #[test]
    fn phase_gate_rejects_out_of_range() {
        assert!(make_phase_gate(0.0).is_err());
        assert!(make_phase_gate(-0.1).is_err());
        assert!(make_phase_gate(3.2).is_err());
        assert!(make_phase_gate(f64::NAN).is_err());
    }

    #[test]
    fn free_evolution() {
        let t = 0.37;
        let u = segment_propagator(0.0, t, &SystemConfig::default());
        let expected = Mat2::diag(Complex64::from_polar(1.0, -t), Complex64::from_polar(1.0, t));
        assert!((u - expected).max_abs() < 1e-15);
    }

    #[test]
    fn matches_series_oracle() {
        let cfg = SystemConfig::default();
        let u = segment_propagator(1.0, PI / 40.0, &cfg);
        assert!((u - oracle(1.0, PI / 40.0, &cfg)).max_abs() < 1e-12);
        let tilted = SystemConfig::new(0.6, -1.3).unwrap();
        for &a in &[-40.0, -3.0, 0.5, 7.0, 50.0] {
            let u = segment_propagator(a, 0.1, &tilted);
            assert!((u - oracle(a, 0.1, &tilted)).max_abs() < 1e-12, "a = {a}");
            assert!(u.unitarity_defect() < 1e-13);
            assert!((u.det().norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_angle_value() {
        let alpha = rotation_angle(3.0, 0.1, &SystemConfig::default());
        assert!((alpha - 0.1 * 10f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn sinc_branches_agree() {
        for &x in &[1e-5f64, 9.9e-5, 1e-4, 1.01e-4] {
            let direct = x.sin() / x;
            assert!((sinc(x) - direct).abs() < 1e-15);
        }
        assert_eq!(sinc(0.0), 1.0);
        for &x in &[1e-3f64, 9e-3, 1.1e-2, 0.3] {
            let direct = (x * x.cos() - x.sin()) / (x * x * x);
            assert!((sinc_slope_over_x(x) - direct).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let cfg = SystemConfig::new(0.8, 0.45).unwrap();
        for &a in &[0.0, 1e-3, -0.7, 2.5, 30.0] {
            let h = 1e-6;
            let fd = (segment_propagator(a + h, 0.2, &cfg) - segment_propagator(a - h, 0.2, &cfg))
                .scale_re(0.5 / h);
            let exact = segment_propagator_derivative(a, 0.2, &cfg);
            assert!((fd - exact).max_abs() < 1e-8, "a = {a}");
        }
    }

    #[test]
    fn product_order_and_intermediates() {
        let cfg = SystemConfig::default();
        let dt = PI / 40.0;
        let ctrl = PiecewiseControl::new(vec![0.3, -1.2], dt).unwrap();
        let prop = propagate(&ctrl, &cfg);
        let expected = segment_propagator(-1.2, dt, &cfg) * segment_propagator(0.3, dt, &cfg);
        assert!((prop.total() - expected).max_abs() < 1e-15);
        assert_eq!(prop.segments.len(), 2);
        assert!((prop.cumulative[0] - prop.segments[0]).max_abs() < 1e-15);
    }

    #[test]
    fn zero_control_is_free_evolution() {
        let ctrl = PiecewiseControl::zeros(6, PI / 40.0).unwrap();
        let t = ctrl.total_time();
        let u = propagate(&ctrl, &SystemConfig::default()).total();
        let expected = Mat2::diag(Complex64::from_polar(1.0, -t), Complex64::from_polar(1.0, t));
        assert!((u - expected).max_abs() < 1e-14);
    }

    #[test]
    fn segment_order_matters() {
        let cfg = SystemConfig::default();
        let dt = PI / 40.0;
        let a = propagate_total(&[0.0, 5.0], dt, &cfg);
        let b = propagate_total(&[5.0, 0.0], dt, &cfg);
        assert!((a - b).max_abs() > 1e-3);
    }

    #[test]
    fn partial_propagation_hits_segment_boundaries() {
        let cfg = SystemConfig::default();
        let ctrl = PiecewiseControl::new(vec![0.4, -0.9, 1.7], 0.2).unwrap();
        let prop = propagate(&ctrl, &cfg);
        for k in 0..3 {
            let t = (k + 1) as f64 * 0.2;
            let u = propagate_to(&ctrl, &cfg, t).unwrap();
            assert!((u - prop.cumulative[k]).max_abs() < 1e-14);
        }
        assert!(propagate_to(&ctrl, &cfg, -0.1).is_err());
        assert!(propagate_to(&ctrl, &cfg, 0.61).is_err());
        assert!((propagate_to(&ctrl, &cfg, 0.0).unwrap() - Mat2::identity()).max_abs() == 0.0);
    }

    #[test]
    fn control_validation() {
        assert!(PiecewiseControl::new(vec![], 0.1).is_err());
        assert!(PiecewiseControl::new(vec![1.0], 0.0).is_err());
        assert!(PiecewiseControl::new(vec![f64::NAN], 0.1).is_err());
        assert!(SystemConfig::new(0.0, 0.0).is_err());
        let c = PiecewiseControl::zeros(4, 0.25).unwrap();
        assert_eq!(c.total_time(), 1.0);
        assert_eq!(c.segment_at(1.0), 3);
        assert_eq!(c.segment_at(0.3), 1);
    }
}
