//! Root bracketing and refinement for the characteristic functions.

use super::characteristic::{f1_over_a, f2_scaled_over_a};
use super::domain::BOUNDARY_TOL;
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Absolute root tolerance.
pub const ROOT_TOL: f64 = 1e-12;

/// A root-containing interval; `lo == hi` marks a known closed-form root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn point(a: f64) -> Self {
        Self { lo: a, hi: a }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Root of `f` inside `[lo, hi]` to absolute tolerance [`ROOT_TOL`].
///
/// Secant steps are taken only when they land inside the current bracket and
/// the bracket keeps halving at least every other step; otherwise bisects.
pub fn refine_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    if a == b {
        return Ok(a);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() && !fb.is_finite() {
        return Err(Error::Bracket { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }
    let mut prev_width = b - a;
    let mut use_secant = true;
    for _ in 0..400 {
        let width = b - a;
        if width <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (a + b);
        let mut x = mid;
        if use_secant && fa.is_finite() && fb.is_finite() {
            let s = b - fb * (b - a) / (fb - fa);
            let margin = 0.01 * width;
            if s > a + margin && s < b - margin {
                x = s;
            }
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // Force a bisection whenever two steps failed to halve the bracket.
        use_secant = b - a <= 0.5 * prev_width || !use_secant;
        if use_secant {
            prev_width = width;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Sign-change brackets of `f` on the grid `xs`, plus pairs of roots hidden
/// between samples where `|f|` dips towards zero without changing sign.
pub fn scan_brackets<F: Fn(f64) -> f64>(f: &F, xs: &[f64]) -> Vec<Bracket> {
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for k in 0..xs.len().saturating_sub(1) {
        let (f0, f1) = (vals[k], vals[k + 1]);
        if f0 == 0.0 {
            out.push(Bracket::point(xs[k]));
            continue;
        }
        if f0.signum() != f1.signum() && f1 != 0.0 {
            out.push(Bracket { lo: xs[k], hi: xs[k + 1] });
            continue;
        }
        if k == 0 {
            continue;
        }
        let fm = vals[k - 1];
        let s = f0.signum();
        if fm.signum() == s && f1.signum() == s && f0.abs() <= fm.abs() && f0.abs() <= f1.abs() {
            out.extend(split_dip(f, xs[k - 1], xs[k + 1], s));
        }
    }
    if let (Some(&x), Some(&v)) = (xs.last(), vals.last()) {
        if v == 0.0 {
            out.push(Bracket::point(x));
        }
    }
    out.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    out.dedup_by(|p, q| p.lo == q.lo && p.hi == q.hi);
    out
}

/// Golden-section search for the extremum of a same-sign dip of `f` on
/// `[lo, hi]`; returns the two brackets around it if `f` crosses zero.
fn split_dip<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, sign: f64) -> Vec<Bracket> {
    let g = |x: f64| sign * f(x);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= 1e-14 * b.abs().max(1.0) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
        if gc.min(gd) < 0.0 {
            break;
        }
    }
    let (xm, gm) = if gc < gd { (c, gc) } else { (d, gd) };
    if gm < 0.0 {
        vec![Bracket { lo, hi: xm }, Bracket { lo: xm, hi }]
    } else {
        Vec::new()
    }
}

/// Uniform scan grid on `(lo, hi]` with at most `step` spacing.
pub fn scan_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    (0..=n).map(|k| lo + k as f64 * h).collect()
}

/// Scan spacing for `F1`: 64 samples per half-period `π/T`, capped at 0.02.
pub fn f1_scan_step(t: f64) -> f64 {
    (PI / t / 64.0).min(0.02)
}

/// `a'_n = (π/2 + 2πn)/T`.
pub fn lattice_upper(n: usize, t: f64) -> f64 {
    (FRAC_PI_2 + 2.0 * PI * n as f64) / t
}

/// Closed-form positive roots of `F1` below `a_max` when `φ_W ∈ {π/2, π}`
/// (all double roots); `None` otherwise.
pub fn closed_form_f1_roots(phi_w: f64, t: f64, a_max: f64) -> Option<Vec<f64>> {
    let (offset, first) = if (phi_w - FRAC_PI_2).abs() <= BOUNDARY_TOL {
        (PI, 0)
    } else if (phi_w - PI).abs() <= BOUNDARY_TOL {
        (0.0, 1)
    } else {
        return None;
    };
    Some(
        (first..)
            .map(|n| (offset + 2.0 * PI * n as f64) / t)
            .take_while(|&a| a < a_max)
            .collect(),
    )
}

/// Brackets of the positive roots of `F1` in `(0, a'_{n_max})`.
///
/// The scan runs on `F1(a)/a`, so the spurious root `a = 0` never appears.
/// For `φ_W ∈ {π/2, π}` the brackets are the degenerate closed-form roots.
pub fn bracket_f1_roots(phi_w: f64, t: f64, n_max: usize) -> Result<Vec<Bracket>> {
    if n_max < 1 || !(t > 0.0) {
        return Err(Error::Domain(format!("need n_max ≥ 1 and T > 0, got {n_max}, {t}")));
    }
    let a_max = lattice_upper(n_max, t);
    if let Some(roots) = closed_form_f1_roots(phi_w, t, a_max) {
        return Ok(roots.into_iter().map(Bracket::point).collect());
    }
    let xs = scan_grid(0.0, a_max, f1_scan_step(t));
    let f = |a: f64| f1_over_a(a, phi_w, t);
    Ok(scan_brackets(&f, &xs[1..]))
}

/// Uniform hyperbolic scan range `max(50, 20/T)`; past it `e^{−aT} < 3e−9`.
pub fn f2_uniform_limit(t: f64) -> f64 {
    (20.0 / t).max(50.0)
}

/// Upper end of the hyperbolic scan.
///
/// For large `aT`, `2e^{−aT}F2(a)/a → −2a sin 2φ_W − 8 cos 2φ_W + 8 sin 2φ_W/a`,
/// whose positive root is `2 tan φ_W` when `φ_W < π/2`. The scan covers twice
/// that root.
pub fn f2_scan_limit(phi_w: f64, t: f64) -> f64 {
    let base = f2_uniform_limit(t);
    let tail = 2.0 * phi_w.tan();
    if phi_w < FRAC_PI_2 && tail.is_finite() && tail > 0.0 {
        base.max(2.0 * tail)
    } else {
        base
    }
}

/// Brackets of the positive roots of `F2` in `(0, a_max]`: step 0.01 up to
/// [`f2_uniform_limit`], then geometric with ratio 1.001, where at most one
/// simple root remains.
pub fn bracket_f2_roots(phi_w: f64, t: f64, a_max: f64) -> Vec<Bracket> {
    let uniform_end = a_max.min(f2_uniform_limit(t));
    let mut xs = scan_grid(0.0, uniform_end, 0.01);
    let mut x = uniform_end;
    while x < a_max {
        x = (x * 1.001).min(a_max);
        xs.push(x);
    }
    let f = |a: f64| f2_scaled_over_a(a, phi_w, t);
    scan_brackets(&f, &xs[1..])
}

#[cfg(test)]
mod tests {
    use super::super::characteristic::{f1, f2};
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = refine_root(|x| x * x - 2.0, Bracket { lo: 1.0, hi: 2.0 }).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let e = refine_root(|x| x * x + 1.0, Bracket { lo: -1.0, hi: 2.0 });
        assert!(matches!(e, Err(Error::Bracket { .. })));
    }

    #[test]
    fn stays_inside_bracket_for_flat_functions() {
        let r = refine_root(|x: f64| (x - 0.3).powi(9), Bracket { lo: 0.0, hi: 1.0 }).unwrap();
        assert!((r - 0.3).abs() < 1e-5);
        assert!((0.0..=1.0).contains(&r));
    }

    #[test]
    fn lattice_at_half_pi() {
        let t = PI / 2.0;
        let b = bracket_f1_roots(FRAC_PI_2, t, 3).unwrap();
        assert!(b.iter().all(|x| x.is_degenerate()));
        assert!((b[1].lo - 6.0).abs() < 1e-12);
        let r = refine_root(|a| f1(a, FRAC_PI_2, t), b[1]).unwrap();
        assert_eq!(r, 6.0);
    }

    #[test]
    fn d1_brackets_alternate() {
        let (pw, t) = (3.0 * PI / 5.0, PI / 20.0);
        let b = bracket_f1_roots(pw, t, 3).unwrap();
        assert!(b.len() >= 3);
        assert!(b.windows(2).all(|w| w[0].hi <= w[1].lo));
        assert!(b.iter().all(|x| x.lo > 2.0));
        for x in &b {
            let r = refine_root(|a| f1(a, pw, t), *x).unwrap();
            assert!(x.contains(r));
            assert!(f1(r, pw, t).abs() < 1e-8 * r * r);
        }
    }

    #[test]
    fn d3_has_root_below_two() {
        let (pw, t) = (19.0 * PI / 20.0, PI / 10.0);
        let lo = (2.0 * PI - 2.0 * pw) / t;
        let b = bracket_f1_roots(pw, t, 2).unwrap();
        assert!(b.iter().any(|x| x.lo >= lo - 0.02 && x.hi <= 2.0));
    }

    #[test]
    fn f2_root_on_the_diagonal_point() {
        let (pw, t) = (PI / 4.0, PI / 4.0);
        let b = bracket_f2_roots(pw, t, 20.0);
        assert!(!b.is_empty());
        let r = refine_root(|a| f2_scaled_over_a(a, pw, t), b[0]).unwrap();
        assert!(f2(r, pw, t).abs() <= 1e-9);
    }

    #[test]
    fn detects_near_tangent_pairs() {
        // Just off φ_W = π/2 each double root splits into a close pair.
        let (pw, t) = (FRAC_PI_2 + 1e-4, 0.5);
        let b = bracket_f1_roots(pw, t, 2).unwrap();
        let a0 = PI / t;
        let near: Vec<_> = b.iter().filter(|x| (x.lo - a0).abs() < 0.5).collect();
        assert_eq!(near.len(), 2, "{b:?}");
    }
}
