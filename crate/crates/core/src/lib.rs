//! Gradient-boosted trees with multi-output leaves for causal effect
//! estimation, plus the data generation and benchmarking toolkit around them.
//!
//! The crate is organized in five layers:
//!
//! - [`gbt`] — the boosting engine: quantile binning, gradient histograms,
//!   depth-wise multi-output trees, missing-value routing.
//! - [`causal`] — potential-outcome estimators on top of the engine: the
//!   joint two-output estimator and S-/T-learner baselines.
//! - [`synth`] — seeded generator for the hidden-confounder toy collection,
//!   with CSV and metadata sidecar I/O.
//! - [`eval`] — |eps_ATE| and PEHE metrics, log10 performance profiles,
//!   aligned-ranks omnibus test and step-down post-hoc adjustment.
//! - [`cli`] — the `cxgb` command-line driver for reproducible runs.

pub mod causal;
pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod gbt;
pub mod synth;

pub use data::{Dataset, Matrix};
pub use error::{Error, Result};
