//! Training configuration for the boosting engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperparameters for [`fit`](crate::gbt::fit).
///
/// Defaults follow the conventional histogram-method settings: 100 trees of
/// depth 5, L2 leaf penalty 1.0, learning rate 0.3, 256 bins, minimum child
/// hessian mass 1.0 and base score 0.5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub reg_lambda: f64,
    pub learning_rate: f64,
    pub max_bins: usize,
    pub min_child_weight: f64,
    /// Initial prediction, replicated across outputs.
    pub base_score: f64,
    /// Splits with gain less than or equal to this are rejected.
    pub min_split_gain: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n_estimators: 100,
            max_depth: 5,
            reg_lambda: 1.0,
            learning_rate: 0.3,
            max_bins: 256,
            min_child_weight: 1.0,
            base_score: 0.5,
            min_split_gain: 0.0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_estimators < 1 {
            return Err(Error::Config("n_estimators must be >= 1".into()));
        }
        if self.max_depth < 1 {
            return Err(Error::Config("max_depth must be >= 1".into()));
        }
        if !(2..=65535).contains(&self.max_bins) {
            return Err(Error::Config("max_bins must be in [2, 65535]".into()));
        }
        if !self.reg_lambda.is_finite() || self.reg_lambda < 0.0 {
            return Err(Error::Config("reg_lambda must be a nonnegative real".into()));
        }
        // learning_rate 0 is tolerated as a degenerate zero-step configuration
        // (every leaf value scales to zero); values above 1 are rejected.
        if !self.learning_rate.is_finite() || !(0.0..=1.0).contains(&self.learning_rate) {
            return Err(Error::Config("learning_rate must lie in [0, 1]".into()));
        }
        if !self.min_child_weight.is_finite() || self.min_child_weight < 0.0 {
            return Err(Error::Config(
                "min_child_weight must be a nonnegative real".into(),
            ));
        }
        if !self.min_split_gain.is_finite() || self.min_split_gain < 0.0 {
            return Err(Error::Config(
                "min_split_gain must be a nonnegative real".into(),
            ));
        }
        if !self.base_score.is_finite() {
            return Err(Error::Config("base_score must be finite".into()));
        }
        Ok(())
    }
}
