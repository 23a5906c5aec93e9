//! On-disk estimator models: the engine serialization plus a header naming
//! the estimator kind (and hessian mode where applicable).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::causal::{CausalModel, SLearnerModel, TLearnerModel};
use crate::data::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Cxgboost,
    Slearner,
    Tlearner,
}

impl std::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimatorKind::Cxgboost => write!(f, "cxgboost"),
            EstimatorKind::Slearner => write!(f, "slearner"),
            EstimatorKind::Tlearner => write!(f, "tlearner"),
        }
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cxgboost" => Ok(EstimatorKind::Cxgboost),
            "slearner" => Ok(EstimatorKind::Slearner),
            "tlearner" => Ok(EstimatorKind::Tlearner),
            other => Err(format!(
                "unknown estimator '{other}' (expected cxgboost, slearner or tlearner)"
            )),
        }
    }
}

/// Any fitted potential-outcome estimator, tagged for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "lowercase")]
pub enum EstimatorModel {
    Cxgboost(CausalModel),
    Slearner(SLearnerModel),
    Tlearner(TLearnerModel),
}

impl EstimatorModel {
    pub fn kind(&self) -> EstimatorKind {
        match self {
            EstimatorModel::Cxgboost(_) => EstimatorKind::Cxgboost,
            EstimatorModel::Slearner(_) => EstimatorKind::Slearner,
            EstimatorModel::Tlearner(_) => EstimatorKind::Tlearner,
        }
    }

    pub fn predict_potential(&self, features: &Matrix) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            EstimatorModel::Cxgboost(m) => m.predict_potential(features),
            EstimatorModel::Slearner(m) => m.predict_potential(features),
            EstimatorModel::Tlearner(m) => m.predict_potential(features),
        }
    }

    pub fn estimate_ate(&self, features: &Matrix) -> Result<f64> {
        let (q0, q1) = self.predict_potential(features)?;
        super::estimate_ate(&q0, &q1)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<EstimatorModel> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
