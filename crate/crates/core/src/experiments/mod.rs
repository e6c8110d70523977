//! Grid sweep, result tables, statistics, minimal times, two-segment
//! landscapes and randomized derivative checks.

pub mod grid;
pub mod landscape;
pub mod mintime;
pub mod oracles;
pub mod stats;
pub mod sweep;
pub mod tables;

pub use grid::{build_grid, in_group, GridNode, GridSpec, N_PHI, N_T};
pub use landscape::{two_segment_landscape, LandscapeGrid};
pub use mintime::{
    column_from_records, min_time_record, min_time_scan, optimize_column, ColumnSample, MinTimeRecord,
    MinTimeScan, REACH_TOL,
};
pub use oracles::{gradient_check, hessian_check, GradientCheck, HessianCheck, WorstCase};
pub use stats::{amplitude_stats, delta_stats, empirical_cdf, sweep_stats, AmplitudeStats, DeltaStats, SweepStats};
pub use sweep::{optimize_node, sweep, NodeFailure, RunSummary, SweepConfig, SweepOutcome, SweepRecord};
pub use tables::{emit_tables, round3, Table};
