use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

/// Absolute tolerance for the boundary lines `φ_W + T = π`, `φ_W = π/2`, `T = π/2`.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A point `(φ_W, T)` of the parameter square with coupling strength `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    pub phi_w: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub v: f64,
}

impl LandscapePoint {
    /// `v = 1`. Requires `φ_W ∈ (0, π]`, `T ∈ (0, π/2]` up to [`BOUNDARY_TOL`].
    pub fn new(phi_w: f64, t: f64) -> Result<Self> {
        Self::with_coupling(phi_w, t, 1.0)
    }

    pub fn with_coupling(phi_w: f64, t: f64, v: f64) -> Result<Self> {
        if !(phi_w > 0.0 && phi_w <= PI + BOUNDARY_TOL) {
            return Err(Error::Domain(format!("phi_W = {phi_w} outside (0, π]")));
        }
        if !(t > 0.0 && t <= FRAC_PI_2 + BOUNDARY_TOL) {
            return Err(Error::Domain(format!("T = {t} outside (0, π/2]")));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("coupling v = {v} must be positive")));
        }
        Ok(Self { phi_w, t, v })
    }

    /// `φ = −(φ_W + T)`.
    pub fn phi(&self) -> f64 {
        -(self.phi_w + self.t)
    }

    pub fn sin_2phi(&self) -> f64 {
        (2.0 * self.phi()).sin()
    }

    pub fn domain(&self) -> DomainLabel {
        classify(self.phi_w, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainLabel {
    D1,
    D2,
    D3,
    D4,
    #[serde(rename = "EXCLUDED")]
    Excluded,
}

impl DomainLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            DomainLabel::D1 => "D1",
            DomainLabel::D2 => "D2",
            DomainLabel::D3 => "D3",
            DomainLabel::D4 => "D4",
            DomainLabel::Excluded => "EXCLUDED",
        }
    }

    /// Whether the reduced operator `K` exists (`sin 2φ ≠ 0`).
    pub fn has_reduced_operator(&self) -> bool {
        matches!(self, DomainLabel::D1 | DomainLabel::D3 | DomainLabel::D4)
    }
}

impl fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D1" => Ok(DomainLabel::D1),
            "D2" => Ok(DomainLabel::D2),
            "D3" => Ok(DomainLabel::D3),
            "D4" => Ok(DomainLabel::D4),
            "EXCLUDED" => Ok(DomainLabel::Excluded),
            other => Err(Error::Config(format!("unknown domain label '{other}'"))),
        }
    }
}

/// Why a point of the square carries no D1–D4 label; `None` for labelled points.
pub fn excluded_reason(phi_w: f64, t: f64) -> Option<&'static str> {
    let near = |a: f64, b: f64| (a - b).abs() <= BOUNDARY_TOL;
    if near(phi_w, PI) && near(t, FRAC_PI_2) {
        Some("corner (π, π/2) is excluded from D3")
    } else if phi_w < FRAC_PI_2 - BOUNDARY_TOL && near(phi_w + t, FRAC_PI_2) {
        Some("diagonal φ_W + T = π/2 where sin 2φ = 0")
    } else {
        None
    }
}

fn classify(phi_w: f64, t: f64) -> DomainLabel {
    let near = |a: f64, b: f64| (a - b).abs() <= BOUNDARY_TOL;
    if excluded_reason(phi_w, t).is_some() {
        return DomainLabel::Excluded;
    }
    if phi_w < FRAC_PI_2 - BOUNDARY_TOL {
        return DomainLabel::D4;
    }
    let sum = phi_w + t;
    if near(sum, PI) {
        DomainLabel::D2
    } else if sum < PI {
        DomainLabel::D1
    } else {
        DomainLabel::D3
    }
}

/// The unique label of `(φ_W, T)` in `(0, π] × (0, π/2]`.
pub fn classify_domain(phi_w: f64, t: f64) -> Result<DomainLabel> {
    LandscapePoint::new(phi_w, t).map(|p| p.domain())
}
