//! Potential-outcome estimators built on the boosting engine.
//!
//! The joint estimator trains one ensemble of two-output trees predicting the
//! control-arm and treatment-arm conditional outcomes; each row's loss only
//! touches the observed arm. S- and T-learner baselines reuse the same engine
//! with single-output squared loss.

mod cxgboost;
mod model_file;
mod objective;
mod slearner;
mod tlearner;

use serde::{Deserialize, Serialize};

pub use cxgboost::{estimate_ate, fit_cxgboost, CausalFit, CausalModel};
pub use model_file::{EstimatorKind, EstimatorModel};
pub use objective::CausalObjective;
pub use slearner::{fit_slearner, SLearnerFit, SLearnerModel};
pub use tlearner::{fit_tlearner, TLearnerFit, TLearnerModel};

/// How the second derivative of the masked squared loss is supplied to the
/// engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum HessianMode {
    /// Constant 2 for both outputs on every row, as published for this
    /// estimator. Rows contribute curvature to the unobserved arm too, which
    /// shrinks that arm's leaf updates toward zero.
    #[serde(rename = "paper-literal")]
    #[default]
    PaperLiteral,
    /// True second derivative of the masked loss: 2 on the observed arm,
    /// 0 on the other.
    #[serde(rename = "exact")]
    Exact,
}

impl std::fmt::Display for HessianMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HessianMode::PaperLiteral => write!(f, "paper-literal"),
            HessianMode::Exact => write!(f, "exact"),
        }
    }
}

impl std::str::FromStr for HessianMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-literal" => Ok(HessianMode::PaperLiteral),
            "exact" => Ok(HessianMode::Exact),
            other => Err(format!(
                "unknown hessian mode '{other}' (expected 'paper-literal' or 'exact')"
            )),
        }
    }
}

/// Masked squared loss for one row: the observed arm's squared error.
///
/// `(1 - t) (q0 - y)^2 + t (q1 - y)^2`
#[inline]
pub fn causal_loss(q0: f64, q1: f64, t: u8, y: f64) -> f64 {
    let t = t as f64;
    (1.0 - t) * (q0 - y) * (q0 - y) + t * (q1 - y) * (q1 - y)
}

/// First derivatives of [`causal_loss`] in (q0, q1).
#[inline]
pub fn causal_gradient(q0: f64, q1: f64, t: u8, y: f64) -> (f64, f64) {
    let t = t as f64;
    (2.0 * (1.0 - t) * (q0 - y), 2.0 * t * (q1 - y))
}

/// Second derivatives of the loss in (q0, q1) under the chosen mode.
#[inline]
pub fn causal_hessian(t: u8, mode: HessianMode) -> (f64, f64) {
    match mode {
        HessianMode::PaperLiteral => (2.0, 2.0),
        HessianMode::Exact => {
            let t = t as f64;
            (2.0 * (1.0 - t), 2.0 * t)
        }
    }
}
