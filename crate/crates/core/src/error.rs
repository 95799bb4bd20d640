use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, the ranking code and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} returned a non-finite value ({value}) at x = {x:?}")]
    NonFinite { what: String, value: f64, x: Vec<f64> },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid decision matrix: {0}")]
    InvalidMatrix(String),

    #[error("objective index {index} out of range for {count} objectives")]
    ObjectiveIndex { index: usize, count: usize },

    #[error("empty candidate set")]
    EmptyCandidates,

    #[error("lattice has {size} points, above the enumeration limit of {limit}")]
    LatticeTooLarge { size: u128, limit: u128 },

    #[error("degenerate objective {index}: PIS and NIS are both {value}")]
    DegenerateObjective { index: usize, value: f64 },

    #[error("unknown {kind} '{name}' (expected one of {expected})")]
    UnknownName {
        kind: &'static str,
        name: String,
        expected: &'static str,
    },

    #[error("run {run} (seed {seed}) failed: {source}")]
    RunFailed {
        run: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
