use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("infeasible master problem: vertex {vertex} is not covered by any column")]
    Uncovered { vertex: usize },

    #[error("simplex stalled after {iterations} iterations (last feasible objective {objective})")]
    SolverStall { iterations: usize, objective: f64 },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
