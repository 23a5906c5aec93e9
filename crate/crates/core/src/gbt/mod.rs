//! Histogram-based second-order gradient boosting with multi-output leaves.
//!
//! Trees share one split structure; each leaf stores a vector of values, one
//! per objective output. Missing feature values are never binned — each split
//! learns a default direction for them from the training gradients.

mod binning;
mod booster;
mod config;
mod grower;
mod objective;
mod tree;

pub use binning::{BinMapper, BinnedMatrix, MISSING_BIN};
pub use booster::{fit, FitResult, Model};
pub use config::TrainConfig;
pub use grower::grow_tree;
pub use objective::{GradHess, Objective, SquaredLoss};
pub use tree::{Tree, TreeNode};
