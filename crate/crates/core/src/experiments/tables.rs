//! 10 × 11 tables of Ĵ and Δ, rows T10..T1, columns φ¹..φ¹¹.

use super::grid::{N_PHI, N_T};
use super::sweep::SweepRecord;
use crate::error::{Error, Result};
use serde::Serialize;

/// Round half away from zero to 3 decimals; `-0.0` normalizes to `0.0`.
pub fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0 + 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    /// `values[r][c]` holds node `(j = c, i = 10 − r)`.
    pub values: Vec<Vec<f64>>,
}

impl Table {
    fn empty(name: &str) -> Self {
        Self { name: name.into(), values: vec![vec![f64::NAN; N_PHI]; N_T] }
    }

    fn row_of(i: usize) -> usize {
        N_T - i
    }

    /// Full-precision value at `T_i` (1..=10), `φ^{j+1}` (j = 0..10).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[Self::row_of(i)][j]
    }

    pub fn rounded(&self, i: usize, j: usize) -> f64 {
        round3(self.get(i, j))
    }

    pub fn row_labels() -> Vec<String> {
        (1..=N_T).rev().map(|i| format!("T{i}")).collect()
    }

    pub fn column_labels() -> Vec<String> {
        (1..=N_PHI).map(|j| format!("phi{j}")).collect()
    }

    /// Plain-text rendering with values rounded to 3 decimals.
    pub fn render(&self) -> String {
        let mut s = format!("{:<5}", self.name);
        for c in Self::column_labels() {
            s.push_str(&format!("{c:>7}"));
        }
        s.push('\n');
        for (label, row) in Self::row_labels().iter().zip(&self.values) {
            s.push_str(&format!("{label:<5}"));
            for &v in row {
                s.push_str(&format!("{:>7.3}", round3(v)));
            }
            s.push('\n');
        }
        s
    }
}

/// Builds the Ĵ and Δ tables; every one of the 110 nodes must be present.
pub fn emit_tables(records: &[SweepRecord]) -> Result<(Table, Table)> {
    let mut table_j = Table::empty("J");
    let mut table_delta = Table::empty("Delta");
    let mut seen = [[false; N_PHI]; N_T];
    for r in records {
        if r.j >= N_PHI || r.i == 0 || r.i > N_T {
            return Err(Error::Domain(format!("record (i={}, j={}) is off the grid", r.i, r.j)));
        }
        let row = Table::row_of(r.i);
        table_j.values[row][r.j] = r.j_hat;
        table_delta.values[row][r.j] = r.delta;
        seen[row][r.j] = true;
    }
    let missing: Vec<(usize, usize)> = (1..=N_T)
        .flat_map(|i| (0..N_PHI).map(move |j| (i, j)))
        .filter(|&(i, j)| !seen[Table::row_of(i)][j])
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteSweep(missing));
    }
    Ok((table_j, table_delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round3(0.0625), 0.063);
        assert_eq!(round3(-0.0625), -0.063);
        assert_eq!(round3(0.97552825), 0.976);
        assert_eq!(round3(-1e-9).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn incomplete_sweep_lists_missing_nodes() {
        match emit_tables(&[]) {
            Err(Error::IncompleteSweep(m)) => {
                assert_eq!(m.len(), 110);
                assert_eq!(m[0], (1, 0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
