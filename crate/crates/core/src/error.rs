use std::path::PathBuf;

use thiserror::Error;

use crate::index::{BoundKey, Phase};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("inverted bounds: min {min} > max {max}")]
    InvertedBounds { min: f64, max: f64 },

    #[error("no data: {0}")]
    NoData(String),

    #[error("incomplete context: missing bounds for {0}")]
    IncompleteContext(BoundKey),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid outlier policy: {0}")]
    InvalidPolicy(String),

    #[error("exclusion entries not found in dataset: {}", .0.join(", "))]
    UnmatchedExclusions(Vec<String>),

    #[error("schema error: missing required column(s) {}", .0.join(", "))]
    MissingColumns(Vec<String>),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("dataset error: duplicate record {player} {season} {phase}")]
    Duplicate {
        player: String,
        season: String,
        phase: Phase,
    },

    #[error("summary table has no row for {0}")]
    MissingRow(String),

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
