//! The 11 × 10 grid of gate phases and final times.

use crate::spectral::{classify_domain, DomainLabel};
use serde::Serialize;
use std::f64::consts::PI;

pub const N_PHI: usize = 11;
pub const N_T: usize = 10;

/// `φ_W^j = π/2 + jπ/20` (j = 0..10), `T_i = iπ/20` (i = 1..10),
/// `K_i = 2i` segments of the fixed step `dt = π/40`.
#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub phi_values: Vec<f64>,
    #[serde(rename = "T_values")]
    pub t_values: Vec<f64>,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridNode {
    pub j: usize,
    pub i: usize,
    #[serde(rename = "phi_W")]
    pub phi_w: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub segments: usize,
    pub dt: f64,
    pub domain: DomainLabel,
}

impl GridNode {
    /// Position in (i, j) lexicographic order, independent of any filtering.
    pub fn ordinal(&self) -> usize {
        (self.i - 1) * N_PHI + self.j
    }

    pub fn in_group(&self, label: DomainLabel) -> bool {
        in_group(self.domain, label)
    }
}

/// Grid bookkeeping groups the excluded corner `(π, π/2)` with D3.
pub fn in_group(domain: DomainLabel, label: DomainLabel) -> bool {
    domain == label || (label == DomainLabel::D3 && domain == DomainLabel::Excluded)
}

pub fn build_grid() -> GridSpec {
    let step = PI / 20.0;
    GridSpec {
        phi_values: (0..N_PHI).map(|j| PI / 2.0 + j as f64 * step).collect(),
        // i·(π/20) equals 2i·(π/40) bit for bit: halving is exact.
        t_values: (1..=N_T).map(|i| i as f64 * step).collect(),
        dt: PI / 40.0,
    }
}

impl GridSpec {
    /// Grid spacing in both φ_W and T.
    pub fn step(&self) -> f64 {
        PI / 20.0
    }

    pub fn segments(&self, i: usize) -> usize {
        2 * i
    }

    pub fn node(&self, j: usize, i: usize) -> Option<GridNode> {
        if j >= self.phi_values.len() || i == 0 || i > self.t_values.len() {
            return None;
        }
        let (phi_w, t) = (self.phi_values[j], self.t_values[i - 1]);
        let domain = classify_domain(phi_w, t).ok()?;
        Some(GridNode { j, i, phi_w, t, segments: self.segments(i), dt: self.dt, domain })
    }

    /// All nodes sorted by (i, j).
    pub fn nodes(&self) -> Vec<GridNode> {
        (1..=self.t_values.len())
            .flat_map(|i| (0..self.phi_values.len()).filter_map(move |j| self.node(j, i)))
            .collect()
    }

    pub fn nodes_in(&self, label: DomainLabel) -> Vec<GridNode> {
        self.nodes().into_iter().filter(|n| n.in_group(label)).collect()
    }

    /// Column index of `phi_w` if it lies on the grid.
    pub fn column_of(&self, phi_w: f64) -> Option<usize> {
        self.phi_values.iter().position(|&p| (p - phi_w).abs() <= 1e-9)
    }
}
