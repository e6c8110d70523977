//! Artifact emission and angle parsing.
//!
//! Every float is written as `{:.16e}` (17 significant digits), which
//! round-trips `f64` bit for bit. Only `manifest.json` carries a timestamp,
//! so all other artifacts are byte-identical across reruns with equal inputs.

use crate::error::{Error, Result};
use crate::experiments::{
    emit_tables, sweep_stats, GridSpec, LandscapeGrid, SweepConfig, SweepOutcome, SweepStats, Table,
};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

pub const SWEEP_FILE: &str = "sweep.json";
pub const TABLE1_FILE: &str = "table1.csv";
pub const TABLE2_FILE: &str = "table2.csv";
pub const STATS_FILE: &str = "stats.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// 17 significant digits in scientific notation.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON whose floats use [`format_f64`]; non-finite values become `null`.
struct ExactFloats(PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for ExactFloats {
    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );

    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_f64(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// Parses decimal radians or a rational multiple of π: `1.885`, `pi`,
/// `-pi/2`, `3pi/5`, `3*pi/5`, `0.5π`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot parse angle '{text}' (use radians or forms like 3pi/5)"));
    let s: String = text.trim().to_ascii_lowercase().replace('π', "pi").chars().filter(|c| !c.is_whitespace()).collect();
    let value = match s.split_once("pi") {
        None => s.parse::<f64>().map_err(|_| bad())?,
        Some((coef, rest)) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => coef.parse::<f64>().map_err(|_| bad())?,
            };
            let d = match rest {
                "" => 1.0,
                _ => rest.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
            };
            if d == 0.0 {
                return Err(bad());
            }
            c * PI / d
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn write_table_csv(path: &Path, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["T".to_string()];
    header.extend(Table::column_labels());
    w.write_record(&header)?;
    for (label, row) in Table::row_labels().into_iter().zip(&table.values) {
        let mut rec = vec![label];
        rec.extend(row.iter().map(|&v| format_f64(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn landscape_file_name(phi_w: f64, t: f64) -> String {
    format!("landscape_{phi_w:.4}_{t:.4}.csv")
}

pub fn write_landscape_csv(path: &Path, grid: &LandscapeGrid) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["a1", "a2", "J"])?;
    for row in grid.triples() {
        w.write_record(row.iter().map(|&v| format_f64(v)))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    schema: u32,
    config: &'a SweepConfig,
    grid: &'a GridSpec,
    #[serde(flatten)]
    outcome: &'a SweepOutcome,
}

#[derive(Serialize)]
struct StatsDocument<'a> {
    schema: u32,
    #[serde(flatten)]
    stats: &'a SweepStats,
}

/// Files written by [`write_sweep_artifacts`].
#[derive(Debug, Clone, Default)]
pub struct SweepArtifacts {
    pub files: Vec<PathBuf>,
    pub tables: Option<(Table, Table)>,
    /// Why the tables were not written, if they were not.
    pub tables_skipped: Option<String>,
    pub stats: Option<SweepStats>,
}

/// Writes `sweep.json` and `stats.json`, plus both tables when all 110 nodes are present.
pub fn write_sweep_artifacts(
    dir: &Path,
    cfg: &SweepConfig,
    grid: &GridSpec,
    outcome: &SweepOutcome,
) -> Result<SweepArtifacts> {
    fs::create_dir_all(dir)?;
    let mut out = SweepArtifacts::default();
    let doc = SweepDocument { schema: SCHEMA_VERSION, config: cfg, grid, outcome };
    let path = dir.join(SWEEP_FILE);
    write_json(&path, &doc)?;
    out.files.push(path);

    match emit_tables(&outcome.records) {
        Ok((tj, td)) => {
            for (name, t) in [(TABLE1_FILE, &tj), (TABLE2_FILE, &td)] {
                let path = dir.join(name);
                write_table_csv(&path, t)?;
                out.files.push(path);
            }
            out.tables = Some((tj, td));
        }
        Err(e) => out.tables_skipped = Some(e.to_string()),
    }

    let stats = sweep_stats(&outcome.records);
    let path = dir.join(STATS_FILE);
    write_json(&path, &StatsDocument { schema: SCHEMA_VERSION, stats: &stats })?;
    out.files.push(path);
    out.stats = Some(stats);
    Ok(out)
}

#[derive(Serialize)]
struct Manifest<'a> {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    /// Seconds since the Unix epoch.
    timestamp: u64,
    files: Vec<String>,
}

/// `manifest.json` listing `files` by name; the only artifact with a timestamp.
pub fn write_manifest(dir: &Path, command: &str, files: &[PathBuf]) -> Result<PathBuf> {
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let files = files
        .iter()
        .map(|p| p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned()))
        .collect();
    let m = Manifest {
        schema: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        timestamp,
        files,
    };
    let path = dir.join(MANIFEST_FILE);
    write_json(&path, &m)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_angle_forms() {
        let cases = [
            ("1.885", 1.885),
            ("pi", PI),
            ("-pi/2", -PI / 2.0),
            ("3pi/5", 3.0 * PI / 5.0),
            ("3*pi/5", 3.0 * PI / 5.0),
            (" 19 PI / 20 ", 19.0 * PI / 20.0),
            ("0.5π", 0.5 * PI),
        ];
        for (s, v) in cases {
            assert_eq!(parse_angle(s).unwrap(), v, "{s}");
        }
        for s in ["", "pi/0", "abc", "3pi5", "pi/x", "inf"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }

    #[test]
    fn json_uses_seventeen_digits_and_null_for_nan() {
        let s = to_json_string(&vec![0.1, f64::NAN, -2.5]).unwrap();
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("null"));
        assert!(s.contains("-2.5000000000000000e0"));
    }

    proptest! {
        #[test]
        fn floats_round_trip_bit_exactly(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            prop_assert_eq!(format_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
            let back: Vec<f64> = serde_json::from_str(&to_json_string(&vec![x]).unwrap()).unwrap();
            prop_assert_eq!(back[0].to_bits(), x.to_bits());
        }
    }
}
