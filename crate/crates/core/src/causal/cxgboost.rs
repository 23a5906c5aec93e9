//! The joint two-output causal estimator.

use serde::{Deserialize, Serialize};

use crate::causal::{CausalObjective, HessianMode};
use crate::data::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::gbt::{self, Model, TrainConfig};

/// Ensemble of two-output trees: output 0 predicts the control-arm outcome
/// `Q(0, x)`, output 1 the treatment-arm outcome `Q(1, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalModel {
    pub engine: Model,
    pub hessian_mode: HessianMode,
}

/// A fitted [`CausalModel`] with training diagnostics.
#[derive(Debug, Clone)]
pub struct CausalFit {
    pub model: CausalModel,
    pub loss_curve: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Fit the joint estimator. The treatment indicator drives the loss masking
/// and is never part of the feature matrix seen by splits.
pub fn fit_cxgboost(
    dataset: &Dataset,
    config: &TrainConfig,
    mode: HessianMode,
) -> Result<CausalFit> {
    let treatment = dataset
        .treatment
        .as_ref()
        .ok_or_else(|| Error::Data("joint estimator requires a treatment vector".into()))?;

    let mut warnings = Vec::new();
    let n_treated: usize = treatment.iter().map(|&t| t as usize).sum();
    if n_treated == 0 {
        warnings.push("dataset has no treated rows; Q(1, x) stays near base_score".into());
    } else if n_treated == treatment.len() {
        warnings.push("dataset has no control rows; Q(0, x) stays near base_score".into());
    }

    let objective = CausalObjective::new(treatment.clone(), dataset.outcome.clone(), mode);
    let fit = gbt::fit(dataset, &objective, config)?;
    Ok(CausalFit {
        model: CausalModel {
            engine: fit.model,
            hessian_mode: mode,
        },
        loss_curve: fit.loss_curve,
        warnings,
    })
}

impl CausalModel {
    /// Predicted potential outcomes `(q0, q1)` for every row, unclamped.
    pub fn predict_potential(&self, features: &Matrix) -> Result<(Vec<f64>, Vec<f64>)> {
        let flat = self.engine.predict(features)?;
        let n = features.n_rows();
        let mut q0 = Vec::with_capacity(n);
        let mut q1 = Vec::with_capacity(n);
        for r in 0..n {
            q0.push(flat[2 * r]);
            q1.push(flat[2 * r + 1]);
        }
        Ok((q0, q1))
    }

    pub fn estimate_ate(&self, features: &Matrix) -> Result<f64> {
        let (q0, q1) = self.predict_potential(features)?;
        estimate_ate(&q0, &q1)
    }
}

/// Mean predicted individual effect: `mean(q1 - q0)`.
pub fn estimate_ate(q0: &[f64], q1: &[f64]) -> Result<f64> {
    if q0.is_empty() || q0.len() != q1.len() {
        return Err(Error::Data(format!(
            "ATE needs nonempty equal-length predictions, got {} and {}",
            q0.len(),
            q1.len()
        )));
    }
    let sum: f64 = q1.iter().zip(q0).map(|(a, b)| a - b).sum();
    Ok(sum / q0.len() as f64)
}
