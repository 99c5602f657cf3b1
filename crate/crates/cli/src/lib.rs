#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Scenario files, the built-in catalog and result bundles for the
//! `holotrans` command-line tool.

pub mod catalog;
pub mod explain;
pub mod output;
pub mod run;
pub mod scenario;

use thiserror::Error;

pub use run::{run_scenario, ResultBundle, RunOutput};
pub use scenario::{parse_scenario, Analysis, Scenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("schema error at `{path}` (line {line}, column {column}): {message}")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scenario, {field}: {message}")]
    Validation { field: String, message: String },

    #[error("unknown analysis '{0}' (known: geometry, entropy, thm31, thm32, thm33, cor35, thm43, prop44, simulate, recurrence-trend)")]
    UnknownAnalysis(String),

    #[error("unknown built-in scenario '{0}'")]
    UnknownScenario(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
