//! Training objectives: per-row first and second derivatives of the loss.

use crate::error::{Error, Result};

/// Per-sample, per-output first (`g`) and second (`h`) derivatives of the
/// training loss, row-major (`[row * n_outputs + output]`).
#[derive(Debug, Clone)]
pub struct GradHess {
    pub n_rows: usize,
    pub n_outputs: usize,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

impl GradHess {
    pub fn zeros(n_rows: usize, n_outputs: usize) -> Self {
        GradHess {
            n_rows,
            n_outputs,
            g: vec![0.0; n_rows * n_outputs],
            h: vec![0.0; n_rows * n_outputs],
        }
    }

    /// Fails with the offending (row, output) if any derivative is non-finite
    /// or any hessian entry is negative.
    pub fn check_finite(&self) -> Result<()> {
        for r in 0..self.n_rows {
            for k in 0..self.n_outputs {
                let i = r * self.n_outputs + k;
                if !self.g[i].is_finite() {
                    return Err(Error::NonFiniteDerivative {
                        what: "gradient",
                        row: r,
                        output: k,
                    });
                }
                if !self.h[i].is_finite() || self.h[i] < 0.0 {
                    return Err(Error::NonFiniteDerivative {
                        what: "hessian",
                        row: r,
                        output: k,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A second-order training objective over a fixed set of targets.
///
/// `predictions` passed to both methods is row-major `n_rows x n_outputs`.
pub trait Objective: Sync {
    fn n_outputs(&self) -> usize;

    /// Fill `gh` with derivatives of the loss at the current predictions.
    fn grad_hess(&self, predictions: &[f64], gh: &mut GradHess);

    /// Mean training loss at the current predictions.
    fn loss(&self, predictions: &[f64]) -> f64;
}

/// Plain squared-error objective: `g = 2 (p - y)`, `h = 2`.
pub struct SquaredLoss {
    targets: Vec<f64>,
}

impl SquaredLoss {
    pub fn new(targets: Vec<f64>) -> Self {
        SquaredLoss { targets }
    }
}

impl Objective for SquaredLoss {
    fn n_outputs(&self) -> usize {
        1
    }

    fn grad_hess(&self, predictions: &[f64], gh: &mut GradHess) {
        for (i, &y) in self.targets.iter().enumerate() {
            gh.g[i] = 2.0 * (predictions[i] - y);
            gh.h[i] = 2.0;
        }
    }

    fn loss(&self, predictions: &[f64]) -> f64 {
        let n = self.targets.len();
        let sse: f64 = self
            .targets
            .iter()
            .zip(predictions)
            .map(|(y, p)| (p - y) * (p - y))
            .sum();
        sse / n as f64
    }
}
