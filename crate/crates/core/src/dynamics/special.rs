//! The special constant control, its time scale, and the closed-form
//! two-segment trace.

use super::matrix::Mat2;
use super::propagator::{sinc, SystemConfig};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `f0 = (−Tr H0 · Tr V + 2 Tr(H0 V)) / ((Tr V)² − 2 Tr(V²))`.
///
/// This is the constant control that makes the traceless part of
/// `H0 + f0 V` orthogonal to the traceless part of `V`.
pub fn special_control_f0(h0: &Mat2, v: &Mat2) -> Result<f64> {
    if !h0.is_hermitian(1e-12) || !v.is_hermitian(1e-12) {
        return Err(Error::Domain("H0 and V must be Hermitian".into()));
    }
    let tr_h0 = h0.trace().re;
    let tr_v = v.trace().re;
    let tr_h0v = h0.trace_product(v).re;
    let tr_v2 = v.trace_product(v).re;
    let denominator = tr_v * tr_v - 2.0 * tr_v2;
    if denominator.abs() <= 1e-14 * (1.0 + tr_v2.abs()) {
        return Err(Error::Degenerate(
            "V is proportional to the identity; f0 is undefined".into(),
        ));
    }
    Ok((-tr_h0 * tr_v + 2.0 * tr_h0v) / denominator)
}

/// Spread `λ_max − λ_min` of a Hermitian 2×2 matrix.
fn eigenvalue_spread(m: &Mat2) -> f64 {
    let diff = (m.get(0, 0) - m.get(1, 1)).re;
    (diff * diff + 4.0 * m.get(0, 1).norm_sqr()).sqrt()
}

/// `T0 = π / ‖H0 − I·Tr H0/2 + f0 (V − I·Tr V/2)‖` where the norm is the
/// eigenvalue spread, so that `H0 = σz` gives `T0 = π/2`.
pub fn special_time(h0: &Mat2, v: &Mat2) -> Result<f64> {
    let f0 = special_control_f0(h0, v)?;
    let half_trace = |m: &Mat2| Mat2::identity().scale(m.trace() * 0.5);
    let traceless = (*h0 - half_trace(h0)) + (*v - half_trace(v)).scale_re(f0);
    let spread = eigenvalue_spread(&traceless);
    if spread <= 0.0 {
        return Err(Error::Degenerate("H0 + f0 V is proportional to the identity".into()));
    }
    Ok(PI / spread)
}

/// `T0` for the configured system (`H0 = σz`).
pub fn special_time_t0(cfg: &SystemConfig) -> f64 {
    special_time(&cfg.drift(), &cfg.interaction()).expect("σz drift with nonzero V is never degenerate")
}

/// `Tr(W†U)` for two segments of length `dt` with `V = σx`:
///
/// ```text
/// 2 cos φ_W {cos α1 cos α2 − dt²(1 + a1 a2) sinc α1 sinc α2}
///   − 2 dt sin φ_W {sinc α1 cos α2 + sinc α2 cos α1}
/// ```
///
/// The trace is real for this family; the objective is its square over 4.
pub fn two_segment_trace(a1: f64, a2: f64, dt: f64, phi_w: f64) -> f64 {
    let alpha1 = dt * (1.0 + a1 * a1).sqrt();
    let alpha2 = dt * (1.0 + a2 * a2).sqrt();
    let (c1, c2) = (alpha1.cos(), alpha2.cos());
    let (s1, s2) = (sinc(alpha1), sinc(alpha2));
    2.0 * phi_w.cos() * (c1 * c2 - dt * dt * (1.0 + a1 * a2) * s1 * s2)
        - 2.0 * dt * phi_w.sin() * (s1 * c2 + s2 * c1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::matrix::ZERO;
    use crate::dynamics::propagator::{make_phase_gate, propagate_total};
    use crate::rng::CounterRng;
    use num_complex::Complex64;

    #[test]
    fn f0_vanishes_for_normalized_model() {
        let z = Mat2::sigma_z();
        assert_eq!(special_control_f0(&z, &Mat2::sigma_x()).unwrap(), 0.0);
        assert_eq!(special_control_f0(&z, &Mat2::sigma_y()).unwrap(), 0.0);
        let cfg = SystemConfig::from_polar(2.3, 0.4).unwrap();
        assert!(special_control_f0(&z, &cfg.interaction()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn f0_orthogonalizes_traceless_parts() {
        // Oracle: f0 solves Tr((h + f0 w) w) = 0 for the traceless parts h, w.
        let h0 = Mat2::sigma_z() + Mat2::sigma_x();
        let v = Mat2::sigma_x();
        let f0 = special_control_f0(&h0, &v).unwrap();
        assert!((f0 + 1.0).abs() < 1e-15);

        let h0 = Mat2::from_pauli(Complex64::new(0.7, 0.0), 0.3.into(), (-1.2).into(), 0.9.into());
        let v = Mat2::from_pauli(Complex64::new(-0.4, 0.0), 1.5.into(), 0.25.into(), (-0.6).into());
        let f0 = special_control_f0(&h0, &v).unwrap();
        let strip = |m: &Mat2| *m - Mat2::identity().scale(m.trace() * 0.5);
        let (h, w) = (strip(&h0), strip(&v));
        assert!(((h + w.scale_re(f0)).trace_product(&w)).norm() < 1e-14);
    }

    #[test]
    fn f0_rejects_scalar_interaction() {
        assert!(matches!(
            special_control_f0(&Mat2::sigma_z(), &Mat2::identity()),
            Err(Error::Degenerate(_))
        ));
        let non_hermitian = Mat2::from_pauli(ZERO, Complex64::new(0.0, 1.0), ZERO, ZERO);
        assert!(special_control_f0(&Mat2::sigma_z(), &non_hermitian).is_err());
    }

    #[test]
    fn special_time_values() {
        assert!((special_time_t0(&SystemConfig::default()) - PI / 2.0).abs() < 1e-15);
        assert!((special_time_t0(&SystemConfig::from_polar(3.0, 1.0).unwrap()) - PI / 2.0).abs() < 1e-15);
        let t = special_time(&Mat2::sigma_z().scale_re(2.0), &Mat2::sigma_x()).unwrap();
        assert!((t - PI / 4.0).abs() < 1e-15);
        // Shifting H0 by a multiple of I changes nothing.
        let shifted = Mat2::sigma_z() + Mat2::identity().scale_re(5.0);
        assert!((special_time(&shifted, &Mat2::sigma_y()).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_segment_trace_at_zero_control() {
        let dt = PI / 40.0;
        for &phi in &[0.6 * PI, 0.95 * PI, PI] {
            let tr = two_segment_trace(0.0, 0.0, dt, phi);
            assert!((tr - 2.0 * (phi + 2.0 * dt).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn two_segment_trace_matches_matrix_product() {
        let cfg = SystemConfig::default();
        let mut rng = CounterRng::new(99);
        for _ in 0..2_000 {
            let a1 = rng.uniform_range(-50.0, 50.0);
            let a2 = rng.uniform_range(-50.0, 50.0);
            let dt = rng.uniform_range(0.01, 0.5);
            let phi = rng.uniform_range(0.01, PI);
            let w = make_phase_gate(phi).unwrap();
            let tr = w.dagger().trace_product(&propagate_total(&[a1, a2], dt, &cfg));
            let closed = two_segment_trace(a1, a2, dt, phi);
            assert!((tr.re - closed).abs() < 1e-12 && tr.im.abs() < 1e-12);
            assert!((closed - two_segment_trace(a2, a1, dt, phi)).abs() < 1e-14);
        }
    }
}
