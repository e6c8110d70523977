use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "GRAPE")]
    Grape,
    #[serde(rename = "DE")]
    De,
    #[serde(rename = "DA")]
    Da,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Grape, Method::De, Method::Da];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Grape => "GRAPE",
            Method::De => "DE",
            Method::Da => "DA",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "grape" => Ok(Method::Grape),
            "de" => Ok(Method::De),
            "da" => Ok(Method::Da),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected grape, de or da)"
            ))),
        }
    }
}

/// Differential-evolution hyperparameters (rand/1/bin).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeParams {
    /// Population is `max(pop_per_dim · K, min_pop)`.
    pub pop_per_dim: usize,
    pub min_pop: usize,
    /// Mutation factor drawn uniformly from `[f_min, f_max]` each generation.
    pub f_min: f64,
    pub f_max: f64,
    pub crossover: f64,
    /// Finish with a box-constrained gradient polish of the best member.
    pub polish: bool,
    /// Fraction of the evaluation budget held back for the polish.
    pub polish_share: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            pop_per_dim: 15,
            min_pop: 30,
            f_min: 0.5,
            f_max: 1.0,
            crossover: 0.7,
            polish: true,
            polish_share: 0.1,
        }
    }
}

/// Generalized simulated annealing hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaParams {
    pub visit: f64,
    pub accept: f64,
    pub initial_temp: f64,
    /// Reanneal when the temperature drops below `initial_temp · restart_temp_ratio`.
    pub restart_temp_ratio: f64,
    pub max_iter: usize,
    /// Polish improved incumbents with the box-constrained gradient ascent.
    pub local_search: bool,
}

impl Default for DaParams {
    fn default() -> Self {
        Self {
            visit: 2.62,
            accept: -5.0,
            initial_temp: 5230.0,
            restart_temp_ratio: 2e-5,
            max_iter: 1000,
            local_search: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Box half-width ν for DE and DA.
    pub bound: f64,
    /// Also confine GRAPE to the box.
    pub grape_box: bool,
    /// GRAPE draws its start uniformly from `[-A, A]`.
    pub init_amplitude: f64,
    pub max_evals: usize,
    /// Iteration cap for GRAPE.
    pub max_iters: usize,
    pub seed: u64,
    /// Stop when the relative objective improvement of an ascent step falls below this.
    pub tolerance: f64,
    pub de: DeParams,
    pub da: DaParams,
}

impl OptimizerConfig {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            bound: 50.0,
            grape_box: false,
            init_amplitude: 1.0,
            max_evals: 50_000,
            max_iters: 1_000,
            seed: 0,
            tolerance: 1e-14,
            de: DeParams::default(),
            da: DaParams::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if (matches!(self.method, Method::De | Method::Da) || self.grape_box) && !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(Error::Config(format!("bound ν must be positive, got {}", self.bound)));
        }
        if !(self.init_amplitude >= 0.0 && self.init_amplitude.is_finite()) {
            return Err(Error::Config(format!(
                "initial amplitude must be non-negative, got {}",
                self.init_amplitude
            )));
        }
        if self.max_evals == 0 || self.max_iters == 0 {
            return Err(Error::Config("evaluation and iteration budgets must be positive".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::Config("tolerance must be non-negative".into()));
        }
        let de = &self.de;
        if !(0.0 < de.f_min && de.f_min <= de.f_max && de.f_max <= 2.0) {
            return Err(Error::Config("DE mutation range must satisfy 0 < f_min ≤ f_max ≤ 2".into()));
        }
        if !(0.0..=1.0).contains(&de.crossover) {
            return Err(Error::Config("DE crossover rate must lie in [0, 1]".into()));
        }
        if !(0.0..1.0).contains(&de.polish_share) {
            return Err(Error::Config("DE polish share must lie in [0, 1)".into()));
        }
        if de.min_pop < 4 {
            return Err(Error::Config("DE needs a population of at least 4".into()));
        }
        let da = &self.da;
        if !(1.0 < da.visit && da.visit < 3.0) {
            return Err(Error::Config("DA visiting parameter must lie in (1, 3)".into()));
        }
        if !(da.accept < 1.0) {
            return Err(Error::Config("DA acceptance parameter must be below 1".into()));
        }
        if !(da.initial_temp > 0.0) || !(da.restart_temp_ratio > 0.0 && da.restart_temp_ratio < 1.0) {
            return Err(Error::Config("DA temperatures must be positive with restart ratio in (0, 1)".into()));
        }
        Ok(())
    }
}
