//! S-learner baseline: one single-output model over features augmented with
//! the treatment indicator; potential outcomes by toggling that column.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::gbt::{self, Model, SquaredLoss, TrainConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SLearnerModel {
    pub engine: Model,
    /// Index of the appended treatment column in the augmented matrix.
    pub treatment_column: usize,
}

#[derive(Debug, Clone)]
pub struct SLearnerFit {
    pub model: SLearnerModel,
    pub loss_curve: Vec<f64>,
}

pub fn fit_slearner(dataset: &Dataset, config: &TrainConfig) -> Result<SLearnerFit> {
    let treatment = dataset
        .treatment
        .as_ref()
        .ok_or_else(|| Error::Data("S-learner requires a treatment vector".into()))?;
    let t_col: Vec<f64> = treatment.iter().map(|&t| t as f64).collect();
    let augmented = dataset.features.with_appended_column(&t_col)?;
    let aug_ds = Dataset::new(
        augmented,
        None,
        dataset.outcome.clone(),
        None,
        None,
    )?;
    let fit = gbt::fit(&aug_ds, &SquaredLoss::new(dataset.outcome.clone()), config)?;
    Ok(SLearnerFit {
        model: SLearnerModel {
            engine: fit.model,
            treatment_column: dataset.n_features(),
        },
        loss_curve: fit.loss_curve,
    })
}

impl SLearnerModel {
    /// Potential outcomes by forcing the treatment column to 0, then 1.
    pub fn predict_potential(&self, features: &Matrix) -> Result<(Vec<f64>, Vec<f64>)> {
        let q0 = self.predict_with_treatment(features, 0.0)?;
        let q1 = self.predict_with_treatment(features, 1.0)?;
        Ok((q0, q1))
    }

    /// Engine prediction with the treatment column fixed to `t` for all rows.
    pub fn predict_with_treatment(&self, features: &Matrix, t: f64) -> Result<Vec<f64>> {
        let col = vec![t; features.n_rows()];
        let augmented = features.with_appended_column(&col)?;
        self.engine.predict(&augmented)
    }

    pub fn estimate_ate(&self, features: &Matrix) -> Result<f64> {
        let (q0, q1) = self.predict_potential(features)?;
        super::estimate_ate(&q0, &q1)
    }
}
