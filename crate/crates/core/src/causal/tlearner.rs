//! T-learner baseline: independent single-output fits per treatment arm.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::gbt::{self, Model, SquaredLoss, TrainConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TLearnerModel {
    pub model_control: Model,
    pub model_treated: Model,
}

#[derive(Debug, Clone)]
pub struct TLearnerFit {
    pub model: TLearnerModel,
    pub loss_curve_control: Vec<f64>,
    pub loss_curve_treated: Vec<f64>,
}

pub fn fit_tlearner(dataset: &Dataset, config: &TrainConfig) -> Result<TLearnerFit> {
    if dataset.treatment.is_none() {
        return Err(Error::Data("T-learner requires a treatment vector".into()));
    }
    let control = dataset.subset_by_treatment(0)?;
    let treated = dataset.subset_by_treatment(1)?;
    if control.n_rows() == 0 {
        return Err(Error::EmptyArm {
            arm: "control",
            t: 0,
        });
    }
    if treated.n_rows() == 0 {
        return Err(Error::EmptyArm {
            arm: "treated",
            t: 1,
        });
    }
    let fit_c = gbt::fit(&control, &SquaredLoss::new(control.outcome.clone()), config)?;
    let fit_t = gbt::fit(&treated, &SquaredLoss::new(treated.outcome.clone()), config)?;
    Ok(TLearnerFit {
        model: TLearnerModel {
            model_control: fit_c.model,
            model_treated: fit_t.model,
        },
        loss_curve_control: fit_c.loss_curve,
        loss_curve_treated: fit_t.loss_curve,
    })
}

impl TLearnerModel {
    /// Both submodels evaluated on all rows.
    pub fn predict_potential(&self, features: &Matrix) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((
            self.model_control.predict(features)?,
            self.model_treated.predict(features)?,
        ))
    }

    pub fn estimate_ate(&self, features: &Matrix) -> Result<f64> {
        let (q0, q1) = self.predict_potential(features)?;
        super::estimate_ate(&q0, &q1)
    }
}
