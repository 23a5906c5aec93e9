//! Command-line driver: reproducible generate / benchmark / profile / stats
//! runs plus one-off train and predict.
//!
//! Exit codes: 0 success, 2 configuration or data-contract error, 3 partial
//! failure (some benchmark cells failed; see the run report), 4 I/O error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_benchmark, cmd_generate, cmd_predict, cmd_profile, cmd_stats, cmd_train};
pub use config::{
    CollectionSpec, ExperimentConfig, GeneratorCollection, MetricKind, ModelSpec, SplitPolicy,
};
pub use report::{CellFailure, CellRecord, RunReport};

use crate::error::Error;

/// Environment variable overriding the configured output directory.
pub const ENV_OUT_DIR: &str = "CXGB_OUT_DIR";
/// Environment variable overriding the worker thread count.
pub const ENV_THREADS: &str = "CXGB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cxgb", version, about = "Causal gradient boosting benchmark driver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate seeded synthetic datasets (CSV + metadata sidecars).
    Generate {
        #[arg(long)]
        config: PathBuf,
        /// Override the experiment seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit every configured model on every dataset and write metric tables.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Performance profiles from a metrics CSV.
    Profile {
        metrics_csv: PathBuf,
        /// Metric name used for output file naming.
        #[arg(long, value_enum)]
        metric: Option<MetricKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aligned-ranks test with post-hoc adjustment from a metrics CSV.
    Stats {
        metrics_csv: PathBuf,
        /// Significance level for the post-hoc rejections.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit one estimator on a dataset CSV and save the model file.
    Train {
        data_csv: PathBuf,
        /// Model spec JSON: {"estimator": ..., "hessian_mode": ..., "train": {...}}.
        #[arg(long)]
        config: PathBuf,
        /// Path of the model file to write.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Predict potential outcomes for a dataset CSV with a saved model.
    Predict {
        model: PathBuf,
        data_csv: PathBuf,
        /// Path of the prediction CSV to write.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn setup_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var(ENV_THREADS)
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        // Ignore the error if a pool already exists (e.g. in-process reuse).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn effective_out_dir(flag: Option<PathBuf>, configured: &std::path::Path) -> PathBuf {
    flag.or_else(|| std::env::var(ENV_OUT_DIR).ok().map(PathBuf::from))
        .unwrap_or_else(|| configured.to_path_buf())
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Data(_) | Error::EmptyArm { .. }
        | Error::NonFiniteDerivative { .. } => 2,
        Error::Parse { .. } | Error::Io { .. } | Error::Json(_) => 4,
    }
}

fn dispatch(cli: Cli) -> crate::error::Result<i32> {
    match cli.command {
        Command::Generate { config, seed, out } => {
            let mut experiment = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                experiment.seed = seed;
            }
            let out_dir = effective_out_dir(out, &experiment.out_dir);
            cmd_generate(&experiment, &out_dir)?;
            Ok(0)
        }
        Command::Benchmark {
            config,
            seed,
            threads,
            out,
        } => {
            setup_threads(threads);
            let mut experiment = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                experiment.seed = seed;
            }
            let out_dir = effective_out_dir(out, &experiment.out_dir);
            let failures = cmd_benchmark(&experiment, &out_dir)?;
            Ok(if failures == 0 { 0 } else { 3 })
        }
        Command::Profile {
            metrics_csv,
            metric,
            out,
        } => {
            cmd_profile(&metrics_csv, metric, out.as_deref())?;
            Ok(0)
        }
        Command::Stats {
            metrics_csv,
            alpha,
            out,
        } => {
            cmd_stats(&metrics_csv, alpha, out.as_deref())?;
            Ok(0)
        }
        Command::Train {
            data_csv,
            config,
            out,
            seed,
            threads,
        } => {
            setup_threads(threads);
            cmd_train(&data_csv, &config, &out, seed)?;
            Ok(0)
        }
        Command::Predict {
            model,
            data_csv,
            out,
            threads,
        } => {
            setup_threads(threads);
            cmd_predict(&model, &data_csv, &out)?;
            Ok(0)
        }
    }
}

/// Run a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
