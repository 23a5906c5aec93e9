//! The boosting loop: sequential second-order tree fitting.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Matrix};
use crate::error::{Error, Result};
use crate::gbt::binning::BinMapper;
use crate::gbt::config::TrainConfig;
use crate::gbt::grower;
use crate::gbt::objective::{GradHess, Objective};
use crate::gbt::tree::{Tree, TreeNode};

/// A fitted ensemble. Leaf vectors are stored already scaled by the learning
/// rate, so a prediction is `base_score + sum of leaf vectors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub n_outputs: usize,
    pub n_features: usize,
    pub base_score: Vec<f64>,
    pub trees: Vec<Tree>,
    pub config: TrainConfig,
}

/// Output of [`fit`]: the model plus the recorded mean training loss after
/// each boosting iteration.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: Model,
    pub loss_curve: Vec<f64>,
}

/// Fit `config.n_estimators` trees against the objective's derivatives.
pub fn fit(dataset: &Dataset, objective: &dyn Objective, config: &TrainConfig) -> Result<FitResult> {
    config.validate()?;
    let n = dataset.n_rows();
    if n == 0 {
        return Err(Error::Data("cannot fit on an empty dataset".into()));
    }
    let k = objective.n_outputs();

    let mapper = BinMapper::fit(&dataset.features, config.max_bins);
    let binned = mapper.bin_matrix(&dataset.features);

    let mut preds = vec![config.base_score; n * k];
    let mut gh = GradHess::zeros(n, k);
    let mut trees = Vec::with_capacity(config.n_estimators);
    let mut loss_curve = Vec::with_capacity(config.n_estimators);

    for _ in 0..config.n_estimators {
        objective.grad_hess(&preds, &mut gh);
        gh.check_finite()?;
        let grown = grower::grow(&binned, &mapper, &gh, config);
        for r in 0..n {
            if let TreeNode::Leaf { values } = &grown.tree.nodes[grown.leaf_of_row[r]] {
                for out in 0..k {
                    preds[r * k + out] += values[out];
                }
            }
        }
        trees.push(grown.tree);
        loss_curve.push(objective.loss(&preds));
    }

    Ok(FitResult {
        model: Model {
            n_outputs: k,
            n_features: dataset.n_features(),
            base_score: vec![config.base_score; k],
            trees,
            config: config.clone(),
        },
        loss_curve,
    })
}

impl Model {
    /// Predict all rows; output is row-major `n_rows x n_outputs`.
    pub fn predict(&self, features: &Matrix) -> Result<Vec<f64>> {
        if features.n_cols() != self.n_features {
            return Err(Error::Data(format!(
                "prediction features have {} columns, model was trained on {}",
                features.n_cols(),
                self.n_features
            )));
        }
        let k = self.n_outputs;
        let mut out = vec![0.0; features.n_rows() * k];
        out.par_chunks_mut(k).enumerate().for_each(|(r, row_out)| {
            row_out.copy_from_slice(&self.base_score);
            let row = features.row(r);
            for tree in &self.trees {
                tree.accumulate(row, row_out);
            }
        });
        Ok(out)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Model> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: Model = serde_json::from_str(&text)?;
        Ok(model)
    }
}
