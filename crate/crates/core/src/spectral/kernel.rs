//! The Hessian kernel at the zero control and the reduced operator `K`.
//!
//! `Hess(s,t) = −2v² cos φ cos(2|t−s| + φ)` and `K = Hess / (v² sin 2φ)`,
//! i.e. `K(s,t) = −cos(2|t−s| + φ) / sin φ`.

use super::domain::LandscapePoint;
use super::quadrature::{apply_toeplitz, integrate};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

const SIN_2PHI_MIN: f64 = 1e-12;

fn check_time(p: &LandscapePoint, s: f64, t: f64) -> Result<()> {
    let ok = |x: f64| (0.0..=p.t).contains(&x);
    if ok(s) && ok(t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("(s, t) = ({s}, {t}) outside [0, {}]", p.t)))
    }
}

fn hess_of_gap(p: &LandscapePoint, gap: f64) -> f64 {
    let phi = p.phi();
    -2.0 * p.v * p.v * phi.cos() * (2.0 * gap + phi).cos()
}

fn reduced_of_gap(p: &LandscapePoint, gap: f64) -> f64 {
    let phi = p.phi();
    -(2.0 * gap + phi).cos() / phi.sin()
}

pub fn hessian_kernel(s: f64, t: f64, p: &LandscapePoint) -> Result<f64> {
    check_time(p, s, t)?;
    Ok(hess_of_gap(p, (t - s).abs()))
}

/// Errors with `NotApplicable` when `sin 2φ = 0`.
pub fn ensure_reducible(p: &LandscapePoint) -> Result<()> {
    if p.sin_2phi().abs() <= SIN_2PHI_MIN {
        Err(Error::NotApplicable(format!(
            "sin 2φ = 0 at (φ_W, T) = ({}, {}); the reduced operator is undefined",
            p.phi_w, p.t
        )))
    } else {
        Ok(())
    }
}

pub fn reduced_kernel(s: f64, t: f64, p: &LandscapePoint) -> Result<f64> {
    ensure_reducible(p)?;
    check_time(p, s, t)?;
    Ok(reduced_of_gap(p, (t - s).abs()))
}

/// Uniform grid `t_k = k·T/n`, `k = 0..=n`.
pub fn uniform_grid(p: &LandscapePoint, n: usize) -> Vec<f64> {
    let h = p.t / n as f64;
    (0..=n).map(|k| k as f64 * h).collect()
}

fn check_samples(g: &[f64], min: usize) -> Result<()> {
    if g.len() < min {
        Err(Error::Domain(format!("need at least {min} samples, got {}", g.len())))
    } else {
        Ok(())
    }
}

/// `Kg` at the grid points of `g` (uniform samples over `[0, T]`).
pub fn apply_reduced_kernel(g: &[f64], p: &LandscapePoint) -> Result<Vec<f64>> {
    ensure_reducible(p)?;
    check_samples(g, 3)?;
    let h = p.t / (g.len() - 1) as f64;
    let table: Vec<f64> = (0..g.len()).map(|k| reduced_of_gap(p, k as f64 * h)).collect();
    Ok(apply_toeplitz(&table, g, h))
}

/// `∫ Hess(t,s) g(s) ds` at the grid points of `g`.
pub fn apply_hessian(g: &[f64], p: &LandscapePoint) -> Result<Vec<f64>> {
    check_samples(g, 3)?;
    let h = p.t / (g.len() - 1) as f64;
    let table: Vec<f64> = (0..g.len()).map(|k| hess_of_gap(p, k as f64 * h)).collect();
    Ok(apply_toeplitz(&table, g, h))
}

/// `(Hess δf, δf) = ∫∫ Hess(t,s) δf(t) δf(s) dt ds` for uniform samples of `δf`.
pub fn quadratic_form(delta_f: &[f64], p: &LandscapePoint) -> Result<f64> {
    check_samples(delta_f, 128)?;
    let h = p.t / (delta_f.len() - 1) as f64;
    let hg = apply_hessian(delta_f, p)?;
    let prod: Vec<f64> = hg.iter().zip(delta_f).map(|(a, b)| a * b).collect();
    Ok(integrate(&prod, h))
}

/// `(Hess δf, δf)` for the piecewise-constant `δf` with `amplitudes` on
/// consecutive segments of length `dt`, integrated exactly cell by cell.
///
/// Cell pair `(k, l)` with `m = |k − l|` contributes `−2v² cos φ · I(m)`,
/// `I(0) = −dt sin φ + (cos φ − cos(2dt + φ))/2`, `I(m) = sin²dt · cos(2m·dt + φ)`.
pub fn quadratic_form_piecewise(amplitudes: &[f64], dt: f64, p: &LandscapePoint) -> Result<f64> {
    let n = amplitudes.len();
    if n == 0 || !(dt > 0.0) {
        return Err(Error::Domain("need at least one segment of positive length".into()));
    }
    if ((n as f64 * dt) - p.t).abs() > 1e-9 * p.t.max(1.0) {
        return Err(Error::Domain(format!(
            "segments cover {} but T = {}",
            n as f64 * dt,
            p.t
        )));
    }
    let phi = p.phi();
    let cell: Vec<f64> = (0..n)
        .map(|m| {
            if m == 0 {
                -dt * phi.sin() + (phi.cos() - (2.0 * dt + phi).cos()) / 2.0
            } else {
                dt.sin().powi(2) * (2.0 * m as f64 * dt + phi).cos()
            }
        })
        .collect();
    let mut acc = 0.0;
    for k in 0..n {
        for l in 0..n {
            acc += amplitudes[k] * amplitudes[l] * cell[k.abs_diff(l)];
        }
    }
    Ok(-2.0 * p.v * p.v * phi.cos() * acc)
}

/// Eigenvalues of the trapezoid Nyström discretization of `K` on `n` points,
/// sorted by decreasing magnitude.
pub fn nystrom_eigenvalues(p: &LandscapePoint, n: usize) -> Result<Vec<f64>> {
    ensure_reducible(p)?;
    if n < 3 {
        return Err(Error::Domain("Nyström needs at least 3 points".into()));
    }
    let h = p.t / (n - 1) as f64;
    let sw: Vec<f64> = (0..n)
        .map(|i| if i == 0 || i == n - 1 { (0.5 * h).sqrt() } else { h.sqrt() })
        .collect();
    let table: Vec<f64> = (0..n).map(|k| reduced_of_gap(p, k as f64 * h)).collect();
    let m = DMatrix::from_fn(n, n, |i, j| sw[i] * table[i.abs_diff(j)] * sw[j]);
    let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    Ok(eig)
}
