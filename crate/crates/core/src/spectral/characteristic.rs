//! Characteristic functions and coefficient matrices of the three eigenvalue branches.
//!
//! With `λ = 1/μ`, an eigenfunction `g` of `K` satisfies `h'' = 4(λ − 1)h` for
//! `h = μg`, plus two boundary conditions. Each branch turns those conditions
//! into a 2×2 linear system `M(a)·x = 0`:
//!
//! * oscillatory (`λ < 1`, `a² = 4(1 − λ)`): `h = b cos at + c sin at`, `x = (b, c)`, `det = F1(a)`;
//! * linear (`λ = 1`): `h = ct + b`, `x = (c, b)`, `det = 4Δ`;
//! * hyperbolic (`λ > 1`, `a² = 4(λ − 1)`): `h = b e^{at} + c e^{−at}`, `x = (b, c)`, `det = F2(a)`.

use super::domain::LandscapePoint;

pub type Mat2 = [[f64; 2]; 2];

/// `F1(a) = −4a − (a² + 4) sin(aT) sin 2φ_W + 4a cos(aT) cos 2φ_W`.
pub fn f1(a: f64, phi_w: f64, t: f64) -> f64 {
    let (s2, c2) = (2.0 * phi_w).sin_cos();
    let (sat, cat) = (a * t).sin_cos();
    -4.0 * a - a * a * sat * s2 - 4.0 * sat * s2 + 4.0 * a * cat * c2
}

/// `F1(a)/a`, continuous at `a = 0` with value `4Δ`; it removes the spurious root at 0.
pub fn f1_over_a(a: f64, phi_w: f64, t: f64) -> f64 {
    let (s2, c2) = (2.0 * phi_w).sin_cos();
    let at = a * t;
    let sinc = crate::dynamics::sinc(at);
    -4.0 - a * at.sin() * s2 - 4.0 * t * sinc * s2 + 4.0 * at.cos() * c2
}

/// `F2(a) = 8a − 2a² sinh(aT) sin 2φ_W − 8a cosh(aT) cos 2φ_W + 8 sinh(aT) sin 2φ_W`.
///
/// For `aT > 700` returns an infinity carrying the sign of the dominant
/// `e^{aT}` coefficient.
pub fn f2(a: f64, phi_w: f64, t: f64) -> f64 {
    let (s2, c2) = (2.0 * phi_w).sin_cos();
    let at = a * t;
    if at > 700.0 {
        let lead = -2.0 * a * a * s2 - 8.0 * a * c2 + 8.0 * s2;
        return if lead == 0.0 { 0.0 } else { lead.signum() * f64::INFINITY };
    }
    8.0 * a - 2.0 * a * a * at.sinh() * s2 - 8.0 * a * at.cosh() * c2 + 8.0 * at.sinh() * s2
}

/// `2e^{−aT} F2(a)/a`: same positive roots as `F2`, finite for all `a ≥ 0`,
/// value `−16Δ` at `a = 0`.
pub fn f2_scaled_over_a(a: f64, phi_w: f64, t: f64) -> f64 {
    let (s2, c2) = (2.0 * phi_w).sin_cos();
    let at = a * t;
    let e = (-at).exp();
    let e2 = e * e;
    // 2e^{−aT} sinh(aT) = 1 − e^{−2aT}
    let one_minus = -(-2.0 * at).exp_m1();
    let one_minus_over_a = if a == 0.0 { 2.0 * t } else { one_minus / a };
    16.0 * e - 2.0 * a * one_minus * s2 - 8.0 * (1.0 + e2) * c2 + 8.0 * one_minus_over_a * s2
}

/// `Δ = −2 sin φ_W (sin φ_W + T cos φ_W)`; `μ = 1` is an eigenvalue iff `Δ = 0`.
pub fn mu1_determinant(phi_w: f64, t: f64) -> f64 {
    let (s, c) = phi_w.sin_cos();
    -2.0 * s * (s + t * c)
}

pub fn oscillatory_matrix(a: f64, p: &LandscapePoint) -> Mat2 {
    let phi = p.phi();
    let t = p.t;
    let (sp, cp) = phi.sin_cos();
    let (s2, c2) = (2.0 * t + phi).sin_cos();
    let (sat, cat) = (a * t).sin_cos();
    [
        [
            2.0 * sp - a * sat * c2 + 2.0 * cat * s2,
            a * cat * c2 + 2.0 * sat * s2 - a * cp,
        ],
        [
            a * sat * s2 + 2.0 * cat * c2 - 2.0 * cp,
            -a * sp + 2.0 * sat * c2 - a * cat * s2,
        ],
    ]
}

/// Acts on `(c, b)` for `g = ct + b`; `det = 4Δ`.
pub fn linear_matrix(p: &LandscapePoint) -> Mat2 {
    let phi = p.phi();
    let t = p.t;
    let (sp, cp) = phi.sin_cos();
    let (s2, c2) = (2.0 * t + phi).sin_cos();
    [
        [-cp + c2 + 2.0 * t * s2, 2.0 * (s2 + sp)],
        [sp + s2 - 2.0 * t * c2, 2.0 * (-c2 + cp)],
    ]
}

/// Acts on `(b, c)` for `g = b e^{a(t−T)} + c e^{−at}`, so every entry stays
/// bounded; `det = e^{−aT} F2(a)`.
pub fn hyperbolic_matrix(a: f64, p: &LandscapePoint) -> Mat2 {
    let phi = p.phi();
    let t = p.t;
    let (sp, cp) = phi.sin_cos();
    let (s2, c2) = (2.0 * t + phi).sin_cos();
    let em = (-a * t).exp();
    [
        [
            em * (a * cp - 2.0 * sp) - (a * c2 + 2.0 * s2),
            -a * cp - 2.0 * sp + em * (a * c2 - 2.0 * s2),
        ],
        [
            em * (a * sp + 2.0 * cp) + (a * s2 - 2.0 * c2),
            -a * sp + 2.0 * cp - em * (2.0 * c2 + a * s2),
        ],
    ]
}

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}
