//! Declarative experiment configuration (JSON).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::causal::{EstimatorKind, HessianMode};
use crate::error::{Error, Result};
use crate::gbt::TrainConfig;
use crate::synth::GenConfig;

/// Which split(s) metrics are computed on. Models always fit on `train`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SplitPolicy {
    Train,
    #[default]
    Test,
    Both,
}

impl SplitPolicy {
    pub fn splits(self) -> Vec<&'static str> {
        match self {
            SplitPolicy::Train => vec!["train"],
            SplitPolicy::Test => vec!["test"],
            SplitPolicy::Both => vec!["train", "test"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Ate,
    Pehe,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricKind::Ate => write!(f, "ate"),
            MetricKind::Pehe => write!(f, "pehe"),
        }
    }
}

/// The dataset collection: either seeded generator replications or a
/// directory of `<id>_train.csv` / `<id>_test.csv` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollectionSpec {
    Generator(GeneratorCollection),
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorCollection {
    pub replications: usize,
    pub n_samples: usize,
    pub n_covariates: usize,
    pub sigma_z0: f64,
    pub sigma_z1: f64,
    pub test_fraction: f64,
}

impl Default for GeneratorCollection {
    fn default() -> Self {
        let g = GenConfig::default();
        GeneratorCollection {
            replications: 10,
            n_samples: g.n_samples,
            n_covariates: g.n_covariates,
            sigma_z0: g.sigma_z0,
            sigma_z1: g.sigma_z1,
            test_fraction: g.test_fraction,
        }
    }
}

impl GeneratorCollection {
    /// Generator config of replication `rep` under the experiment seed.
    pub fn gen_config(&self, experiment_seed: u64, rep: usize) -> GenConfig {
        GenConfig {
            n_samples: self.n_samples,
            n_covariates: self.n_covariates,
            sigma_z0: self.sigma_z0,
            sigma_z1: self.sigma_z1,
            seed: experiment_seed.wrapping_add(rep as u64),
            test_fraction: self.test_fraction,
        }
    }

    pub fn dataset_id(&self, experiment_seed: u64, rep: usize) -> String {
        format!("synthetic-{:03}-seed{}", rep, experiment_seed.wrapping_add(rep as u64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub id: String,
    pub estimator: EstimatorKind,
    #[serde(default)]
    pub hessian_mode: HessianMode,
    #[serde(default)]
    pub train: TrainConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub collection: CollectionSpec,
    pub models: Vec<ModelSpec>,
    pub metrics: Vec<MetricKind>,
    #[serde(default)]
    pub split: SplitPolicy,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Config("experiment needs at least one model".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("experiment needs at least one metric".into()));
        }
        if let CollectionSpec::Generator(g) = &self.collection {
            if g.replications == 0 {
                return Err(Error::Config("generator needs replications >= 1".into()));
            }
            g.gen_config(self.seed, 0).validate()?;
        }
        let mut ids: Vec<&str> = self.models.iter().map(|m| m.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.models.len() {
            return Err(Error::Config("model ids must be distinct".into()));
        }
        for m in &self.models {
            m.train.validate()?;
        }
        Ok(())
    }
}
