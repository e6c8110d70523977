//! Gap and amplitude statistics over a domain group of sweep records.

use super::sweep::SweepRecord;
use crate::error::{Error, Result};
use crate::spectral::DomainLabel;
use serde::Serialize;

/// Number of points sampled from each empirical CDF.
pub const CDF_POINTS: usize = 101;

#[derive(Debug, Clone, Serialize)]
pub struct DeltaStats {
    pub subset: DomainLabel,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub min_abs: f64,
    pub max_abs: f64,
    pub mean_abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeStats {
    pub subset: DomainLabel,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub min_abs: f64,
    pub mean_abs: f64,
    /// Share of amplitudes with `|z| ≤ 0.005`.
    pub fraction_abs_le_0_005: f64,
    /// `[z, F(z)]` pairs of the signed empirical CDF.
    pub cdf_signed: Vec<[f64; 2]>,
    pub cdf_abs: Vec<[f64; 2]>,
}

fn subset_of<'a>(records: &'a [SweepRecord], subset: DomainLabel) -> Result<Vec<&'a SweepRecord>> {
    let v: Vec<_> = records.iter().filter(|r| r.in_group(subset)).collect();
    if v.is_empty() {
        return Err(Error::EmptySubset(format!("no sweep records in {subset}")));
    }
    Ok(v)
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sorted-sample CDF thinned to at most `CDF_POINTS` points, always keeping both ends.
pub fn empirical_cdf(values: &[f64]) -> Vec<[f64; 2]> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n == 0 {
        return Vec::new();
    }
    let take = n.min(CDF_POINTS);
    let mut idx: Vec<usize> = (0..take).map(|k| if take == 1 { n - 1 } else { k * (n - 1) / (take - 1) }).collect();
    idx.dedup();
    idx.into_iter().map(|k| [sorted[k], (k + 1) as f64 / n as f64]).collect()
}

pub fn delta_stats(records: &[SweepRecord], subset: DomainLabel) -> Result<DeltaStats> {
    let deltas: Vec<f64> = subset_of(records, subset)?.iter().map(|r| r.delta).collect();
    let abs: Vec<f64> = deltas.iter().map(|d| d.abs()).collect();
    let (min, max) = min_max(&deltas);
    let (min_abs, max_abs) = min_max(&abs);
    Ok(DeltaStats { subset, count: deltas.len(), min, max, min_abs, max_abs, mean_abs: mean(&abs) })
}

pub fn amplitude_stats(records: &[SweepRecord], subset: DomainLabel) -> Result<AmplitudeStats> {
    let z: Vec<f64> = subset_of(records, subset)?
        .iter()
        .flat_map(|r| r.best_control.iter().copied())
        .collect();
    let abs: Vec<f64> = z.iter().map(|x| x.abs()).collect();
    let (min, max) = min_max(&z);
    let (min_abs, _) = min_max(&abs);
    let small = abs.iter().filter(|&&a| a <= 0.005).count();
    Ok(AmplitudeStats {
        subset,
        count: z.len(),
        min,
        max,
        min_abs,
        mean_abs: mean(&abs),
        fraction_abs_le_0_005: small as f64 / z.len() as f64,
        cdf_signed: empirical_cdf(&z),
        cdf_abs: empirical_cdf(&abs),
    })
}

/// Δ and amplitude statistics for each of D1, D2 and D3 (with the corner).
#[derive(Debug, Clone, Serialize)]
pub struct SweepStats {
    pub delta: Vec<DeltaStats>,
    pub amplitudes: Vec<AmplitudeStats>,
}

/// Groups without records are skipped.
pub fn sweep_stats(records: &[SweepRecord]) -> SweepStats {
    let groups = [DomainLabel::D1, DomainLabel::D2, DomainLabel::D3];
    SweepStats {
        delta: groups.iter().filter_map(|&g| delta_stats(records, g).ok()).collect(),
        amplitudes: groups.iter().filter_map(|&g| amplitude_stats(records, g).ok()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_ends_at_one_and_is_monotone() {
        let xs: Vec<f64> = (0..1000).map(|k| ((k * 7919) % 1000) as f64).collect();
        let cdf = empirical_cdf(&xs);
        assert_eq!(cdf.len(), CDF_POINTS);
        assert_eq!(cdf.last().unwrap(), &[999.0, 1.0]);
        assert!(cdf.windows(2).all(|w| w[0][0] <= w[1][0] && w[0][1] < w[1][1]));
        assert_eq!(empirical_cdf(&[2.0]), vec![[2.0, 1.0]]);
    }

    #[test]
    fn empty_subset_is_an_error() {
        assert!(matches!(amplitude_stats(&[], DomainLabel::D1), Err(Error::EmptySubset(_))));
    }
}
