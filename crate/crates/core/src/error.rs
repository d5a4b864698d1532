use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by model construction, extremal analysis and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("popularities must sum to 1 (got {sum}, tolerance {tolerance:e})")]
    Sum { sum: f64, tolerance: f64 },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("at least 2 names are required, got {0}")]
    Size(usize),

    #[error("length mismatch: {left} vs {right}")]
    Shape { left: usize, right: usize },

    #[error("tails are not ordered by majorization: {0}")]
    Order(String),

    #[error("model error: {0}")]
    Model(String),

    #[error(
        "gave up after {raw_draws} raw draws with {accepted} of {requested} conditioned samples"
    )]
    Nontermination {
        raw_draws: u64,
        accepted: u64,
        requested: u64,
    },

    #[error("conditioning event has zero probability")]
    ZeroCondition,
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}
