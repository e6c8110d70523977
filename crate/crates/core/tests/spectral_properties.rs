use proptest::prelude::*;
use qlandscape::experiments::build_grid;
use qlandscape::spectral::{
    apply_reduced_kernel, classify_domain, hessian_kernel, nystrom_eigenvalues, reduced_kernel, spectrum_report,
    Branch, DomainLabel, LandscapePoint, Verdict,
};
use std::f64::consts::{FRAC_PI_2, PI};

/// Random trigonometric test function `Σ c cos(ω s + ψ)`.
#[derive(Debug, Clone)]
struct Smooth(Vec<(f64, f64, f64)>);

impl Smooth {
    fn eval(&self, s: f64) -> f64 {
        self.0.iter().map(|&(c, w, psi)| c * (w * s + psi).cos()).sum()
    }

    /// `∫₀ᵀ cos(2s + φ) g(s) ds` in closed form.
    fn cos_moment(&self, phi: f64, t: f64) -> f64 {
        self.0
            .iter()
            .map(|&(c, w, psi)| 0.5 * c * (int_cos(2.0 + w, phi + psi, t) + int_cos(2.0 - w, phi - psi, t)))
            .sum()
    }

    /// `∫₀ᵀ sin(2s + φ) g(s) ds` in closed form.
    fn sin_moment(&self, phi: f64, t: f64) -> f64 {
        self.0
            .iter()
            .map(|&(c, w, psi)| 0.5 * c * (int_sin(2.0 + w, phi + psi, t) + int_sin(2.0 - w, phi - psi, t)))
            .sum()
    }
}

// ∫₀ᵀ cos(αs + β) ds; a two-term series below |α| = 1e-6.
fn int_cos(alpha: f64, beta: f64, t: f64) -> f64 {
    if alpha.abs() < 1e-6 {
        t * beta.cos() - alpha * t * t / 2.0 * beta.sin()
    } else {
        ((alpha * t + beta).sin() - beta.sin()) / alpha
    }
}

fn int_sin(alpha: f64, beta: f64, t: f64) -> f64 {
    if alpha.abs() < 1e-6 {
        t * beta.sin() + alpha * t * t / 2.0 * beta.cos()
    } else {
        (beta.cos() - (alpha * t + beta).cos()) / alpha
    }
}

fn smooth() -> impl Strategy<Value = Smooth> {
    prop::collection::vec((-1.0..1.0f64, 0.0..6.0f64, 0.0..2.0 * PI), 1..=3).prop_map(Smooth)
}

/// A point where the reduced operator exists, away from `sin 2φ = 0`.
fn reducible_point() -> impl Strategy<Value = LandscapePoint> {
    (0.05..=1.0f64, 0.05..=1.0f64)
        .prop_map(|(u, w)| LandscapePoint::new(u * PI, w * FRAC_PI_2).unwrap())
        .prop_filter("sin 2φ too small", |p| p.sin_2phi().abs() > 0.05)
}

/// Reducible points whose hyperbolic boundary layer (width `T/(2T tan φ_W)`)
/// the capped residual grid resolves.
fn resolved_point() -> impl Strategy<Value = LandscapePoint> {
    reducible_point().prop_filter("boundary layer below grid", |p| {
        p.phi_w >= FRAC_PI_2 || 2.0 * p.phi_w.tan() * p.t <= 1000.0
    })
}

fn samples(g: &Smooth, p: &LandscapePoint, n: usize) -> Vec<f64> {
    (0..=n).map(|k| g.eval(k as f64 * p.t / n as f64)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kernels_are_symmetric(p in reducible_point(), u in 0.0..=1.0f64, w in 0.0..=1.0f64) {
        let (s, t) = (u * p.t, w * p.t);
        prop_assert_eq!(hessian_kernel(s, t, &p).unwrap(), hessian_kernel(t, s, &p).unwrap());
        prop_assert_eq!(reduced_kernel(s, t, &p).unwrap(), reduced_kernel(t, s, &p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    // h = Kg solves h″ + 4h = 4g with the moment initial conditions.
    #[test]
    fn reduced_kernel_solves_second_order_ode(p in reducible_point(), g in smooth()) {
        // Fixed spacing: finer steps let roundoff dominate the second difference.
        let n = ((p.t / 4e-4).ceil() as usize).max(200);
        let step = p.t / n as f64;
        let gs = samples(&g, &p, n);
        let h = apply_reduced_kernel(&gs, &p).unwrap();
        // Nodes 1 and n−1 sit next to one-interval trapezoid panels (O(h³) error);
        // stencils avoid them.
        let worst = (3..=n - 3)
            .map(|k| {
                let h2 = (h[k + 1] - 2.0 * h[k] + h[k - 1]) / (step * step);
                (h2 + 4.0 * h[k] - 4.0 * gs[k]).abs()
            })
            .fold(0.0f64, f64::max);
        prop_assert!(worst <= 1e-5, "ODE residual {worst}");

        let phi = p.phi();
        let h0 = -g.cos_moment(phi, p.t) / phi.sin();
        let dh0 = -2.0 * g.sin_moment(phi, p.t) / phi.sin();
        prop_assert!((h[0] - h0).abs() <= 1e-8, "h(0) {} vs {h0}", h[0]);
        // Fourth-order one-sided difference on the even nodes.
        let slope = (-25.0 * h[0] + 48.0 * h[2] - 36.0 * h[4] + 16.0 * h[6] - 3.0 * h[8]) / (24.0 * step);
        prop_assert!((slope - dh0).abs() <= 1e-8, "h'(0) {slope} vs {dh0}");
    }

    #[test]
    fn eigenpairs_satisfy_branch_identities(p in resolved_point()) {
        let r = spectrum_report(&p, 6).unwrap();
        prop_assert!(!r.eigenvalues.is_empty());
        for e in &r.eigenvalues {
            let mu = match e.branch {
                Branch::Oscillatory => 4.0 / (4.0 - e.a * e.a),
                Branch::Hyperbolic => 4.0 / (4.0 + e.a * e.a),
                Branch::Linear => 1.0,
            };
            prop_assert_eq!(e.mu, mu);
            prop_assert!((e.hess_eig - p.v * p.v * p.sin_2phi() * e.mu).abs() <= 1e-15 * e.hess_eig.abs().max(1.0));
            prop_assert!(e.residual <= 1e-6, "residual {} at a = {}", e.residual, e.a);
            let (b, c) = e.coeffs;
            prop_assert!(((b * b + c * c).sqrt() - 1.0).abs() <= 1e-12);
        }
        prop_assert!(r.eigenvalues.windows(2).all(|w| w[0].mu.abs() >= w[1].mu.abs()));
        let mixed = r.has_positive() && r.has_negative();
        match r.domain {
            DomainLabel::D1 => prop_assert_eq!(r.verdict, Verdict::NegativeDefinite),
            DomainLabel::D3 | DomainLabel::D4 => {
                prop_assert!(mixed);
                prop_assert_eq!(r.verdict, Verdict::Saddle);
            }
            other => prop_assert!(false, "unexpected domain {other:?}"),
        }
    }
}

#[test]
fn d4_points_near_quarter_phase_keep_a_positive_eigenvalue() {
    // The hyperbolic root sits near 2 tan φ_W, far beyond the uniform scan range.
    for (phi_w, t) in [(1.550476831436417, 0.5761157685079438), (1.56, 1.5), (1.57, 0.1)] {
        let p = LandscapePoint::new(phi_w, t).unwrap();
        let r = spectrum_report(&p, 4).unwrap();
        assert_eq!(r.domain, DomainLabel::D4);
        assert_eq!(r.verdict, Verdict::Saddle);
        let hyp: Vec<_> = r.eigenvalues.iter().filter(|e| e.branch == Branch::Hyperbolic).collect();
        assert!(hyp.iter().any(|e| e.a > 50.0 && e.residual <= 1e-6), "({phi_w}, {t}): {hyp:?}");
    }
}

#[test]
fn grid_sign_map() {
    let grid = build_grid();
    let (mut d1, mut d3) = (0, 0);
    for n in grid.nodes() {
        let p = LandscapePoint::new(n.phi_w, n.t).unwrap();
        let r = spectrum_report(&p, 8).unwrap();
        match n.domain {
            DomainLabel::D1 => {
                d1 += 1;
                assert!(r.hessian_eigenvalues().iter().all(|&h| h < 0.0), "node ({}, {})", n.j, n.i);
                assert_eq!(r.verdict, Verdict::NegativeDefinite);
            }
            DomainLabel::D3 => {
                d3 += 1;
                assert!(r.has_positive() && r.has_negative(), "node ({}, {})", n.j, n.i);
                assert_eq!(r.verdict, Verdict::Saddle);
            }
            _ => assert_eq!(r.verdict, Verdict::NotApplicable),
        }
    }
    assert_eq!((d1, d3), (45, 54));
}

#[test]
fn nystrom_matches_analytic_leading_eigenvalues() {
    let points = [(3.0 * PI / 5.0, PI / 20.0), (0.7 * PI, 0.3), (2.9, 1.2), (PI / 4.0, 1.0), (1.0, 0.2)];
    for (phi_w, t) in points {
        let p = LandscapePoint::new(phi_w, t).unwrap();
        assert!(matches!(classify_domain(phi_w, t).unwrap(), DomainLabel::D1 | DomainLabel::D3 | DomainLabel::D4));
        let analytic: Vec<f64> = spectrum_report(&p, 10).unwrap().eigenvalues.iter().map(|e| e.mu).collect();
        let discrete = nystrom_eigenvalues(&p, 512).unwrap();
        for (k, (a, d)) in analytic.iter().zip(&discrete).take(5).enumerate() {
            assert!((a - d).abs() <= 1e-4, "({phi_w}, {t}) eigenvalue {k}: {a} vs {d}");
        }
    }
}
