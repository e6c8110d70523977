//! Objective on a uniform grid over two-segment controls `(a1, a2) ∈ [−ν, ν]²`.

use crate::dynamics::two_segment_trace;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct LandscapeGrid {
    #[serde(rename = "phi_W")]
    pub phi_w: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub nu: f64,
    pub step: f64,
    /// `axis[s] = −ν + s·step`, shared by `a1` and `a2`.
    pub axis: Vec<f64>,
    /// `values[s][q] = J(axis[s], axis[q])`.
    pub values: Vec<Vec<f64>>,
}

/// `N = 2ν/step` must be a whole number (to 1e−9 relative); the grid has `(N+1)²` nodes.
pub fn two_segment_landscape(phi_w: f64, t: f64, nu: f64, step: f64) -> Result<LandscapeGrid> {
    if !(nu > 0.0 && nu.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("need ν > 0 and step > 0, got ν = {nu}, step = {step}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("final time must be positive, got {t}")));
    }
    let ratio = 2.0 * nu / step;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * ratio.max(1.0) || n > 1e5 {
        return Err(Error::Config(format!("2ν/step = {ratio} must be a whole number not above 1e5")));
    }
    let n = n as usize;
    let dt = t / 2.0;
    let axis: Vec<f64> = (0..=n).map(|s| -nu + s as f64 * step).collect();
    let values = axis
        .iter()
        .map(|&a1| {
            axis.iter()
                .map(|&a2| (two_segment_trace(a1, a2, dt, phi_w).powi(2) / 4.0).min(1.0))
                .collect()
        })
        .collect();
    Ok(LandscapeGrid { phi_w, t, nu, step, axis, values })
}

impl LandscapeGrid {
    pub fn size(&self) -> usize {
        self.axis.len()
    }

    /// Index of the axis point `a = 0`, if it is a grid node.
    pub fn center(&self) -> Option<usize> {
        self.axis.iter().position(|&a| a.abs() <= 1e-9 * self.step)
    }

    pub fn value(&self, s: usize, q: usize) -> f64 {
        self.values[s][q]
    }

    /// Values at the (up to 8) neighbours of `(s, q)`.
    pub fn neighbors(&self, s: usize, q: usize) -> Vec<f64> {
        let n = self.size() as isize;
        let mut out = Vec::with_capacity(8);
        for ds in -1..=1isize {
            for dq in -1..=1isize {
                let (a, b) = (s as isize + ds, q as isize + dq);
                if (ds, dq) != (0, 0) && (0..n).contains(&a) && (0..n).contains(&b) {
                    out.push(self.values[a as usize][b as usize]);
                }
            }
        }
        out
    }

    pub fn is_strict_local_max(&self, s: usize, q: usize) -> bool {
        let v = self.value(s, q);
        self.neighbors(s, q).iter().all(|&x| x < v)
    }

    /// Neighbours both above and below the centre value.
    pub fn is_saddle_like(&self, s: usize, q: usize) -> bool {
        let v = self.value(s, q);
        let nb = self.neighbors(s, q);
        nb.iter().any(|&x| x > v) && nb.iter().any(|&x| x < v)
    }

    /// First `(s, q)` in row-major order attaining the maximum.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for (s, row) in self.values.iter().enumerate() {
            for (q, &v) in row.iter().enumerate() {
                if v > self.values[best.0][best.1] {
                    best = (s, q);
                }
            }
        }
        best
    }

    pub fn max(&self) -> f64 {
        let (s, q) = self.argmax();
        self.values[s][q]
    }

    /// `(a1, a2, J)` triples in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.axis.iter().enumerate().flat_map(move |(s, &a1)| {
            self.axis.iter().enumerate().map(move |(q, &a2)| [a1, a2, self.values[s][q]])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn default_grid_shape_and_range() {
        let g = two_segment_landscape(3.0 * PI / 5.0, PI / 20.0, 50.0, 1.0).unwrap();
        assert_eq!(g.size(), 101);
        assert_eq!(g.center(), Some(50));
        assert!(g.values.iter().flatten().all(|&v| (0.0..=1.0).contains(&v)));
        assert_eq!(g.triples().count(), 101 * 101);
    }

    #[test]
    fn rejects_bad_steps() {
        assert!(two_segment_landscape(2.0, 0.1, 50.0, 0.0).is_err());
        assert!(two_segment_landscape(2.0, 0.1, -1.0, 1.0).is_err());
        assert!(two_segment_landscape(2.0, 0.1, 50.0, 0.3).is_err());
    }
}
