//! Minimal final time `T_min = π − φ_W` for `φ_W ∈ [π/2, π]`.

use super::grid::GridSpec;
use super::sweep::{optimize_node, SweepConfig, SweepRecord};
use super::GridNode;
use crate::dynamics::{objective, propagate_total, make_phase_gate, Mat2, SystemConfig};
use crate::error::{Error, Result};
use crate::spectral::classify_domain;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Ĵ threshold at which a gate counts as reached.
pub const REACH_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct MinTimeRecord {
    #[serde(rename = "phi_W")]
    pub phi_w: f64,
    #[serde(rename = "T_min")]
    pub t_min: f64,
    /// Objective of the zero control propagated to `T_min`.
    #[serde(rename = "achieved_J")]
    pub achieved_j: f64,
}

pub fn min_time_record(phi_w: f64) -> Result<MinTimeRecord> {
    if !(FRAC_PI_2..=PI).contains(&phi_w) {
        return Err(Error::Domain(format!("φ_W = {phi_w} lies outside [π/2, π]")));
    }
    let t_min = PI - phi_w;
    let u = if t_min > 0.0 { propagate_total(&[0.0], t_min, &SystemConfig::default()) } else { Mat2::identity() };
    let achieved_j = objective(&make_phase_gate(phi_w)?, &u);
    Ok(MinTimeRecord { phi_w, t_min, achieved_j })
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnSample {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "J_zero")]
    pub j_zero: f64,
    #[serde(rename = "J_hat")]
    pub j_hat: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinTimeScan {
    pub record: MinTimeRecord,
    pub samples: Vec<ColumnSample>,
    /// Smallest sampled `T` with `Ĵ ≥ 1 − REACH_TOL`.
    #[serde(rename = "first_reaching_T")]
    pub first_reaching_t: Option<f64>,
    pub grid_step: f64,
    /// `|first_reaching_T − T_min| ≤ grid_step`.
    pub within_one_step: bool,
}

/// Compares `T_min` with the optimized column `samples` (sorted by `T`).
pub fn min_time_scan(phi_w: f64, samples: Vec<ColumnSample>, grid_step: f64) -> Result<MinTimeScan> {
    let record = min_time_record(phi_w)?;
    let first = samples.iter().find(|s| s.j_hat >= 1.0 - REACH_TOL).map(|s| s.t);
    let within = first.is_some_and(|t| (t - record.t_min).abs() <= grid_step + 1e-12);
    Ok(MinTimeScan { record, samples, first_reaching_t: first, grid_step, within_one_step: within })
}

/// Column samples at grid column `j` taken from sweep records.
pub fn column_from_records(records: &[SweepRecord], j: usize) -> Vec<ColumnSample> {
    let mut out: Vec<ColumnSample> = records
        .iter()
        .filter(|r| r.j == j)
        .map(|r| ColumnSample { t: r.t, j_zero: r.j_zero, j_hat: r.j_hat })
        .collect();
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    out
}

/// Optimizes the grid times `T_i` (with `K = 2i`) at an arbitrary `φ_W`.
/// Node seeds follow the grid column whose index is nearest `φ_W`.
pub fn optimize_column(phi_w: f64, grid: &GridSpec, cfg: &SweepConfig) -> Result<Vec<ColumnSample>> {
    cfg.validate()?;
    let j = ((phi_w - FRAC_PI_2) / grid.step()).round().clamp(0.0, 10.0) as usize;
    let mut out = Vec::with_capacity(grid.t_values.len());
    for (k, &t) in grid.t_values.iter().enumerate() {
        let i = k + 1;
        let node = GridNode {
            j,
            i,
            phi_w,
            t,
            segments: grid.segments(i),
            dt: grid.dt,
            domain: classify_domain(phi_w, t)?,
        };
        let rec = optimize_node(&node, cfg)?;
        out.push(ColumnSample { t, j_zero: rec.j_zero, j_hat: rec.j_hat });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_control_reaches_gate_at_t_min() {
        for phi_w in [FRAC_PI_2, 0.6 * PI, 0.75 * PI, 0.95 * PI, PI] {
            let r = min_time_record(phi_w).unwrap();
            assert!((r.t_min - (PI - phi_w)).abs() < 1e-15);
            assert!((r.achieved_j - 1.0).abs() <= 1e-12, "{phi_w}: {}", r.achieved_j);
        }
        assert!(min_time_record(1.0).is_err());
    }

    #[test]
    fn frontier_uses_first_reaching_sample() {
        let step = PI / 20.0;
        let samples = (1..=10)
            .map(|i| {
                let t = i as f64 * step;
                ColumnSample { t, j_zero: 0.0, j_hat: if i >= 5 { 1.0 } else { 0.5 } }
            })
            .collect();
        let scan = min_time_scan(0.75 * PI, samples, step).unwrap();
        assert_eq!(scan.first_reaching_t, Some(5.0 * step));
        assert!(scan.within_one_step);
    }
}
