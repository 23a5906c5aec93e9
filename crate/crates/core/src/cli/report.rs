//! Run reports for benchmark executions.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// One record per requested (dataset, model, split).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub dataset: String,
    pub model: String,
    pub split: String,
    /// Metric name -> value, for the metrics that succeeded on this cell.
    pub metrics: BTreeMap<String, f64>,
    pub fit_seconds: f64,
    pub predict_seconds: f64,
    pub model_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub dataset: String,
    pub model: String,
    /// Split or metric context, when the failure is narrower than the cell.
    pub context: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub seed: u64,
    pub threads: usize,
    pub records: Vec<CellRecord>,
    pub failures: Vec<CellFailure>,
}

impl RunReport {
    pub fn new(seed: u64) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            threads: rayon::current_num_threads(),
            records: Vec::new(),
            failures: Vec::new(),
        }
    }
}
