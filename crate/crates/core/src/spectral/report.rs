use super::characteristic::{
    f1_over_a, f2_scaled_over_a, hyperbolic_matrix, linear_matrix, mu1_determinant, oscillatory_matrix, Mat2,
};
use super::domain::{DomainLabel, LandscapePoint};
use super::kernel::{apply_reduced_kernel, ensure_reducible, uniform_grid};
use super::quadrature::l2_norm;
use super::roots::{
    bracket_f1_roots, bracket_f2_roots, f2_scan_limit, lattice_upper, refine_root, scan_grid, Bracket,
};
use crate::error::{Error, Result};
use nalgebra::Matrix2;
use serde::Serialize;

/// Eigenvalue branch of `K`, by `λ = 1/μ` relative to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    Oscillatory,
    Linear,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NegativeDefinite,
    Saddle,
    /// Reserved for D2, where `J(f₀) = 1`; [`spectrum_report`] reports
    /// `NotApplicable` there because `K` is undefined.
    GlobalMaxBoundary,
    NotApplicable,
}

/// Fewest intervals over `[0, T]` used for eigenfunction residuals.
pub const RESIDUAL_INTERVALS: usize = 2000;
/// Cap on residual intervals; hyperbolic boundary layers of width `1/a` get
/// 32 intervals per unit of `aT` up to it.
pub const RESIDUAL_INTERVALS_MAX: usize = 40_000;
/// LINEAR branch threshold on `|Δ|`.
pub const LINEAR_TOL: f64 = 1e-10;
/// Largest ratio `σ_min/σ_max` accepted as singular.
const SINGULAR_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenpair {
    pub mu: f64,
    pub a: f64,
    pub branch: Branch,
    /// Unit vector `(b, c)` of the eigenfunction ansatz.
    pub coeffs: (f64, f64),
    pub hess_eig: f64,
    /// `‖Kg − μg‖₂/‖g‖₂` under composite quadrature.
    pub residual: f64,
}

impl Eigenpair {
    /// Oscillatory `((4−a²)/4)(b cos at + c sin at)`, linear `ct + b`,
    /// hyperbolic `((4+a²)/4)(b e^{a(t−T)} + c e^{−at})` on `[0, T]`.
    pub fn eval(&self, t: f64, horizon: f64) -> f64 {
        let (b, c) = self.coeffs;
        let a = self.a;
        match self.branch {
            Branch::Oscillatory => (4.0 - a * a) / 4.0 * (b * (a * t).cos() + c * (a * t).sin()),
            Branch::Linear => c * t + b,
            Branch::Hyperbolic => (4.0 + a * a) / 4.0 * (b * (a * (t - horizon)).exp() + c * (-a * t).exp()),
        }
    }

    /// Samples on the uniform grid with `n` intervals over `[0, T]`.
    pub fn sample(&self, p: &LandscapePoint, n: usize) -> Vec<f64> {
        uniform_grid(p, n).into_iter().map(|t| self.eval(t, p.t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub phi_w: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub v: f64,
    pub domain: DomainLabel,
    /// Sorted by `|μ|` descending.
    pub eigenvalues: Vec<Eigenpair>,
    pub verdict: Verdict,
    /// Oscillatory roots above 2 are truncated to the first `n_eigs`.
    pub n_eigs: usize,
    /// Upper end of the hyperbolic root scan.
    pub hyperbolic_scan_limit: f64,
}

impl SpectrumReport {
    pub fn point(&self) -> LandscapePoint {
        LandscapePoint {
            phi_w: self.phi_w,
            t: self.t,
            v: self.v,
        }
    }

    pub fn hessian_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.hess_eig).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, e| m.max(e.residual))
    }

    pub fn has_positive(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.hess_eig > 0.0)
    }

    pub fn has_negative(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.hess_eig < 0.0)
    }
}

fn coefficient_matrix(a: f64, branch: Branch, p: &LandscapePoint) -> (Mat2, f64) {
    match branch {
        Branch::Oscillatory => (oscillatory_matrix(a, p), 4.0 + 2.0 * a),
        Branch::Linear => (linear_matrix(p), 4.0 + 4.0 * p.t),
        Branch::Hyperbolic => (hyperbolic_matrix(a, p), 2.0 * (4.0 + 2.0 * a)),
    }
}

/// Unit null vectors `(b, c)` of the branch's coefficient matrix at `a`:
/// one for a simple eigenvalue, two when the matrix vanishes.
///
/// The null direction is the right singular vector of the smallest singular value.
pub fn eigenfunction_coeffs(a: f64, branch: Branch, p: &LandscapePoint) -> Result<Vec<(f64, f64)>> {
    let (m, scale) = coefficient_matrix(a, branch, p);
    let mat = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let s = svd.singular_values;
    let (i_min, i_max) = if s[0] <= s[1] { (0, 1) } else { (1, 0) };
    let (s_min, s_max) = (s[i_min], s[i_max]);
    // x = (c, b) on the linear branch.
    let orient = |x0: f64, x1: f64| match branch {
        Branch::Linear => (x1, x0),
        _ => (x0, x1),
    };
    if s_max <= 1e-9 * scale {
        return Ok(vec![orient(1.0, 0.0), orient(0.0, 1.0)]);
    }
    if s_min > SINGULAR_RATIO * s_max {
        return Err(Error::NotAnEigenvalue {
            a,
            sigma_min: s_min,
            sigma_max: s_max,
        });
    }
    Ok(vec![orient(v_t[(i_min, 0)], v_t[(i_min, 1)])])
}

/// `‖Kg − μg‖₂/‖g‖₂` for uniform samples `g` over `[0, T]` (at least 512 points).
pub fn eigen_residual(g: &[f64], mu: f64, p: &LandscapePoint) -> Result<f64> {
    if g.len() < 512 {
        return Err(Error::Domain(format!("need at least 512 samples, got {}", g.len())));
    }
    let h = p.t / (g.len() - 1) as f64;
    let kg = apply_reduced_kernel(g, p)?;
    let diff: Vec<f64> = kg.iter().zip(g).map(|(k, g)| k - mu * g).collect();
    let norm = l2_norm(g, h);
    if norm == 0.0 {
        return Err(Error::Degenerate("zero function has no residual".into()));
    }
    Ok(l2_norm(&diff, h) / norm)
}

fn residual_intervals(a: f64, branch: Branch, p: &LandscapePoint) -> usize {
    match branch {
        Branch::Hyperbolic => ((32.0 * a * p.t).ceil() as usize).clamp(RESIDUAL_INTERVALS, RESIDUAL_INTERVALS_MAX),
        _ => RESIDUAL_INTERVALS,
    }
}

fn make_pairs(a: f64, branch: Branch, p: &LandscapePoint) -> Result<Vec<Eigenpair>> {
    let mu = match branch {
        Branch::Oscillatory => 4.0 / (4.0 - a * a),
        Branch::Linear => 1.0,
        Branch::Hyperbolic => 4.0 / (4.0 + a * a),
    };
    let hess = p.v * p.v * p.sin_2phi() * mu;
    eigenfunction_coeffs(a, branch, p)?
        .into_iter()
        .map(|coeffs| {
            let mut pair = Eigenpair {
                mu,
                a,
                branch,
                coeffs,
                hess_eig: hess,
                residual: 0.0,
            };
            pair.residual = eigen_residual(&pair.sample(p, residual_intervals(a, branch, p)), mu, p)?;
            Ok(pair)
        })
        .collect()
}

fn refine_all<F: Fn(f64) -> f64>(f: F, brackets: &[Bracket]) -> Result<Vec<f64>> {
    brackets.iter().map(|b| refine_root(&f, *b)).collect()
}

/// Eigenpairs of `K` at `p` on all three branches, with the verdict.
///
/// Collects every oscillatory root in `(0, 2)`, the first `n_eigs` above 2,
/// hyperbolic roots up to [`f2_scan_limit`], and the linear branch when
/// `|Δ| ≤ 1e−10`. D2 and excluded points get `NotApplicable` and no pairs.
pub fn spectrum_report(p: &LandscapePoint, n_eigs: usize) -> Result<SpectrumReport> {
    if n_eigs == 0 {
        return Err(Error::Domain("n_eigs must be at least 1".into()));
    }
    let domain = p.domain();
    let a2 = f2_scan_limit(p.phi_w, p.t);
    let mut report = SpectrumReport {
        phi_w: p.phi_w,
        t: p.t,
        v: p.v,
        domain,
        eigenvalues: Vec::new(),
        verdict: Verdict::NotApplicable,
        n_eigs,
        hyperbolic_scan_limit: a2,
    };
    if !domain.has_reduced_operator() {
        return Ok(report);
    }
    ensure_reducible(p)?;
    let (pw, t) = (p.phi_w, p.t);

    let mut n_max = n_eigs + 2;
    let osc_roots = loop {
        let brackets = bracket_f1_roots(pw, t, n_max)?;
        let roots = refine_all(|a| f1_over_a(a, pw, t), &brackets)?;
        if roots.iter().filter(|&&a| a > 2.0).count() >= n_eigs {
            break roots;
        }
        n_max *= 2;
    };
    let mut above = 0;
    for a in osc_roots {
        if a > 2.0 {
            if above == n_eigs {
                break;
            }
            above += 1;
        }
        report.eigenvalues.extend(make_pairs(a, Branch::Oscillatory, p)?);
    }

    let hyp = refine_all(|a| f2_scaled_over_a(a, pw, t), &bracket_f2_roots(pw, t, a2))?;
    for a in hyp {
        report.eigenvalues.extend(make_pairs(a, Branch::Hyperbolic, p)?);
    }

    if mu1_determinant(pw, t).abs() <= LINEAR_TOL {
        report.eigenvalues.extend(make_pairs(0.0, Branch::Linear, p)?);
    }

    report.eigenvalues.sort_by(|x, y| y.mu.abs().total_cmp(&x.mu.abs()));
    report.verdict = match domain {
        DomainLabel::D1 if !report.has_positive() => Verdict::NegativeDefinite,
        DomainLabel::D3 | DomainLabel::D4 if report.has_positive() && report.has_negative() => Verdict::Saddle,
        _ => {
            return Err(Error::LemmaContradiction(format!(
                "{domain} point ({pw}, {t}) has Hessian eigenvalues {:?}",
                report.hessian_eigenvalues()
            )))
        }
    };
    Ok(report)
}

/// Sign information of the normalized characteristic functions
/// `F1(a)/a` on `(0, 2]` and `2e^{−aT}F2(a)/a` on `(0, a_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignScan {
    pub step: f64,
    pub a_max: f64,
    /// Largest value of `F1(a)/a` on `(0, 2]`; negative means no root there.
    pub f1_max: f64,
    pub f1_sign_changes: usize,
    /// Smallest value of `2e^{−aT}F2(a)/a` on `(0, a_max]`; positive means no root.
    pub f2_min: f64,
    pub f2_sign_changes: usize,
}

fn sign_changes(vals: &[f64]) -> usize {
    vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

/// Scans both characteristic functions on a grid of spacing `step`; valid at any point.
pub fn scan_signs(p: &LandscapePoint, step: f64, a_max: f64) -> Result<SignScan> {
    if !(step > 0.0) || !(a_max > 0.0) {
        return Err(Error::Domain("scan step and range must be positive".into()));
    }
    let (pw, t) = (p.phi_w, p.t);
    let xs1 = scan_grid(0.0, 2.0, step);
    let v1: Vec<f64> = xs1[1..].iter().map(|&a| f1_over_a(a, pw, t)).collect();
    let xs2 = scan_grid(0.0, a_max, step);
    let v2: Vec<f64> = xs2[1..].iter().map(|&a| f2_scaled_over_a(a, pw, t)).collect();
    Ok(SignScan {
        step,
        a_max,
        f1_max: v1.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        f1_sign_changes: sign_changes(&v1),
        f2_min: v2.iter().copied().fold(f64::INFINITY, f64::min),
        f2_sign_changes: sign_changes(&v2),
    })
}

/// On D1: `F1 < 0` throughout `(0, 2)` and `F2 > 0` throughout `(0, 50]`.
pub fn sign_scan_lemma_checks(p: &LandscapePoint, step: f64) -> Result<SignScan> {
    if p.domain() != DomainLabel::D1 {
        return Err(Error::Domain(format!("({}, {}) is not a D1 point", p.phi_w, p.t)));
    }
    let scan = scan_signs(p, step, 50.0)?;
    if !(scan.f1_max < 0.0) {
        return Err(Error::LemmaContradiction(format!(
            "F1 reaches {:e} on (0, 2) at ({}, {})",
            scan.f1_max, p.phi_w, p.t
        )));
    }
    if !(scan.f2_min > 0.0) {
        return Err(Error::LemmaContradiction(format!(
            "F2 reaches {:e} on (0, 50] at ({}, {})",
            scan.f2_min, p.phi_w, p.t
        )));
    }
    Ok(scan)
}

/// First `n` oscillatory roots above 2, for callers that only need `a`.
pub fn oscillatory_roots_above_two(p: &LandscapePoint, n: usize) -> Result<Vec<f64>> {
    let (pw, t) = (p.phi_w, p.t);
    let brackets = bracket_f1_roots(pw, t, n + 2)?;
    let mut roots = refine_all(|a| f1_over_a(a, pw, t), &brackets)?;
    roots.retain(|&a| a > 2.0 && a < lattice_upper(n + 2, t));
    roots.truncate(n);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pt(pw: f64, t: f64) -> LandscapePoint {
        LandscapePoint::new(pw, t).unwrap()
    }

    #[test]
    fn d1_negative_definite() {
        let r = spectrum_report(&pt(3.0 * PI / 5.0, PI / 20.0), 8).unwrap();
        assert_eq!(r.verdict, Verdict::NegativeDefinite);
        assert!(r.eigenvalues.len() >= 8);
        assert!(r.hessian_eigenvalues().iter().all(|&h| h < 0.0));
        assert!(r.max_residual() <= 1e-6, "{}", r.max_residual());
    }

    #[test]
    fn d3_and_d4_saddles() {
        for (pw, t) in [(19.0 * PI / 20.0, PI / 10.0), (PI, PI / 20.0), (PI / 4.0, PI / 3.0), (0.3, 0.2)] {
            let r = spectrum_report(&pt(pw, t), 6).unwrap();
            assert_eq!(r.verdict, Verdict::Saddle, "({pw}, {t})");
            assert!(r.max_residual() <= 1e-6, "({pw}, {t}): {}", r.max_residual());
        }
    }

    #[test]
    fn not_applicable_points() {
        for (pw, t) in [(19.0 * PI / 20.0, PI / 20.0), (PI, FRAC_PI_2), (PI / 4.0, PI / 4.0)] {
            let r = spectrum_report(&pt(pw, t), 4).unwrap();
            assert_eq!(r.verdict, Verdict::NotApplicable);
            assert!(r.eigenvalues.is_empty());
        }
    }

    #[test]
    fn double_roots_give_two_eigenfunctions() {
        let p = pt(FRAC_PI_2, PI / 10.0);
        let a = PI / p.t;
        let v = eigenfunction_coeffs(a, Branch::Oscillatory, &p).unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn linear_branch_at_phi_w_pi() {
        let r = spectrum_report(&pt(PI, 0.3), 4).unwrap();
        let lin: Vec<_> = r.eigenvalues.iter().filter(|e| e.branch == Branch::Linear).collect();
        assert_eq!(lin.len(), 1);
        assert!(lin[0].residual < 1e-8);
    }

    #[test]
    fn residual_detects_wrong_mu() {
        let p = pt(3.0 * PI / 5.0, PI / 20.0);
        let r = spectrum_report(&p, 2).unwrap();
        let e = &r.eigenvalues[0];
        let g = e.sample(&p, 1000);
        assert!(eigen_residual(&g, e.mu, &p).unwrap() < 1e-6);
        assert!(eigen_residual(&g, e.mu + 1e-3, &p).unwrap() >= 1e-4);
        assert!(matches!(
            eigenfunction_coeffs(e.a + 0.5, Branch::Oscillatory, &p),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn lemma_scans() {
        let s = sign_scan_lemma_checks(&pt(3.0 * PI / 5.0, PI / 20.0), 1e-3).unwrap();
        assert!(s.f1_max < 0.0 && s.f2_min > 0.0);
        assert!(sign_scan_lemma_checks(&pt(FRAC_PI_2 + 1e-6, PI / 20.0), 1e-3).is_ok());
        let d3 = scan_signs(&pt(19.0 * PI / 20.0, PI / 10.0), 1e-3, 50.0).unwrap();
        assert!(d3.f1_sign_changes >= 1);
        assert!(sign_scan_lemma_checks(&pt(19.0 * PI / 20.0, PI / 10.0), 1e-3).is_err());
    }
}
