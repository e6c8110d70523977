//! Optional TOML config file; command-line flags override its values.

use qlandscape::io::parse_angle;
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Angles may be given as numbers or as strings like `"3pi/5"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Text(String),
}

impl Angle {
    pub fn resolve(&self) -> Result<f64, String> {
        match self {
            Angle::Radians(x) => Ok(*x),
            Angle::Text(s) => parse_angle(s).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub methods: Option<Vec<String>>,
    pub runs: Option<usize>,
    pub workers: Option<usize>,
    pub nu: Option<f64>,
    pub grape_box: Option<bool>,
    pub amplitude: Option<f64>,
    pub max_evals: Option<usize>,
    pub max_iters: Option<usize>,
    pub tolerance: Option<f64>,
    pub only_domain: Option<String>,
    pub phi_w: Option<Angle>,
    #[serde(rename = "T")]
    pub t: Option<Angle>,
    pub n_eigs: Option<usize>,
    pub step: Option<f64>,
    pub samples: Option<usize>,
    pub grad_tol: Option<f64>,
    pub hess_tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}
