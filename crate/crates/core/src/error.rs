use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate system: {0}")]
    Degenerate(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("a = {a} is not an eigenvalue parameter: smallest singular value {sigma_min:e} vs largest {sigma_max:e}")]
    NotAnEigenvalue { a: f64, sigma_min: f64, sigma_max: f64 },

    #[error("lemma contradiction: {0}")]
    LemmaContradiction(String),

    #[error("incomplete sweep, missing nodes (i, j): {0:?}")]
    IncompleteSweep(Vec<(usize, usize)>),

    #[error("empty subset: {0}")]
    EmptySubset(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
