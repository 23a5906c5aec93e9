//! Engine objective for the joint two-output estimator.

use crate::causal::{causal_gradient, causal_hessian, causal_loss, HessianMode};
use crate::gbt::{GradHess, Objective};

/// Two-output objective: output 0 is the control-arm prediction, output 1 the
/// treatment-arm prediction. Each row's derivatives touch only the observed
/// arm (the hessian may additionally cover both arms, see [`HessianMode`]).
pub struct CausalObjective {
    treatment: Vec<u8>,
    outcome: Vec<f64>,
    mode: HessianMode,
}

impl CausalObjective {
    pub fn new(treatment: Vec<u8>, outcome: Vec<f64>, mode: HessianMode) -> Self {
        assert_eq!(treatment.len(), outcome.len());
        CausalObjective {
            treatment,
            outcome,
            mode,
        }
    }
}

impl Objective for CausalObjective {
    fn n_outputs(&self) -> usize {
        2
    }

    fn grad_hess(&self, predictions: &[f64], gh: &mut GradHess) {
        for i in 0..self.outcome.len() {
            let q0 = predictions[2 * i];
            let q1 = predictions[2 * i + 1];
            let (g0, g1) = causal_gradient(q0, q1, self.treatment[i], self.outcome[i]);
            let (h0, h1) = causal_hessian(self.treatment[i], self.mode);
            gh.g[2 * i] = g0;
            gh.g[2 * i + 1] = g1;
            gh.h[2 * i] = h0;
            gh.h[2 * i + 1] = h1;
        }
    }

    fn loss(&self, predictions: &[f64]) -> f64 {
        let n = self.outcome.len();
        let total: f64 = (0..n)
            .map(|i| {
                causal_loss(
                    predictions[2 * i],
                    predictions[2 * i + 1],
                    self.treatment[i],
                    self.outcome[i],
                )
            })
            .sum();
        total / n as f64
    }
}
