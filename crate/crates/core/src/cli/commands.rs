//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Deserialize;

use crate::causal::{
    fit_cxgboost, fit_slearner, fit_tlearner, EstimatorKind, EstimatorModel, HessianMode,
};
use crate::cli::config::{CollectionSpec, ExperimentConfig, MetricKind, ModelSpec};
use crate::cli::report::{CellFailure, CellRecord, RunReport};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::eval::{
    abs_error_ate, far_test, finner_posthoc, pehe, performance_profile, write_profile_csv,
    FarReport, MetricsTable, PROFILE_EPSILON,
};
use crate::gbt::TrainConfig;
use crate::synth::{generate_with_audit, read_csv, write_csv, write_sidecar};

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

/// Generate the configured collection to disk (CSV plus metadata sidecar per
/// split). Deterministic: rerunning a config rewrites identical bytes.
pub fn cmd_generate(config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let generator = match &config.collection {
        CollectionSpec::Generator(g) => g,
        CollectionSpec::Dir(_) => {
            return Err(Error::Config(
                "generate requires a generator collection, not a directory".into(),
            ))
        }
    };
    ensure_dir(out_dir)?;
    for rep in 0..generator.replications {
        let gen_config = generator.gen_config(config.seed, rep);
        let id = generator.dataset_id(config.seed, rep);
        let (train, test) = generate_with_audit(&gen_config)?;
        for (split, data) in [("train", &train), ("test", &test)] {
            let csv_path = out_dir.join(format!("{id}_{split}.csv"));
            write_csv(&data.dataset, &csv_path)?;
            write_sidecar(&data.sidecar, &out_dir.join(format!("{id}_{split}.meta.json")))?;
            println!("wrote {}", csv_path.display());
        }
    }
    Ok(())
}

struct LoadedDataset {
    id: String,
    train: Dataset,
    test: Option<Dataset>,
}

fn load_collection(config: &ExperimentConfig) -> Result<Vec<LoadedDataset>> {
    match &config.collection {
        CollectionSpec::Generator(g) => (0..g.replications)
            .map(|rep| {
                let (train, test) = crate::synth::generate_synthetic(&g.gen_config(config.seed, rep))?;
                Ok(LoadedDataset {
                    id: g.dataset_id(config.seed, rep),
                    train,
                    test: Some(test),
                })
            })
            .collect(),
        CollectionSpec::Dir(dir) => {
            let mut stems = Vec::new();
            let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
            for entry in entries {
                let entry = entry.map_err(|e| Error::io(dir, e))?;
                let name = entry.file_name().to_string_lossy().into_owned();
                if let Some(stem) = name.strip_suffix("_train.csv") {
                    stems.push(stem.to_string());
                }
            }
            stems.sort_unstable();
            if stems.is_empty() {
                return Err(Error::Config(format!(
                    "no *_train.csv datasets found in {}",
                    dir.display()
                )));
            }
            stems
                .into_iter()
                .map(|stem| {
                    let train = read_csv(&dir.join(format!("{stem}_train.csv")))?;
                    let test_path = dir.join(format!("{stem}_test.csv"));
                    let test = if test_path.exists() {
                        Some(read_csv(&test_path)?)
                    } else {
                        None
                    };
                    Ok(LoadedDataset {
                        id: stem,
                        train,
                        test,
                    })
                })
                .collect()
        }
    }
}

fn fit_estimator(spec: &ModelSpec, train: &Dataset) -> Result<EstimatorModel> {
    match spec.estimator {
        EstimatorKind::Cxgboost => {
            let fitted = fit_cxgboost(train, &spec.train, spec.hessian_mode)?;
            for warning in &fitted.warnings {
                eprintln!("warning [{}]: {warning}", spec.id);
            }
            Ok(EstimatorModel::Cxgboost(fitted.model))
        }
        EstimatorKind::Slearner => Ok(EstimatorModel::Slearner(
            fit_slearner(train, &spec.train)?.model,
        )),
        EstimatorKind::Tlearner => Ok(EstimatorModel::Tlearner(
            fit_tlearner(train, &spec.train)?.model,
        )),
    }
}

fn compute_metric(metric: MetricKind, split: &Dataset, q0: &[f64], q1: &[f64]) -> Result<f64> {
    let (mu0, mu1) = match (&split.mu0, &split.mu1) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Data(
                "dataset has no ground-truth potential-outcome means".into(),
            ))
        }
    };
    match metric {
        MetricKind::Ate => abs_error_ate(mu0, mu1, q0, q1),
        MetricKind::Pehe => pehe(mu0, mu1, q0, q1),
    }
}

/// Fit every model on every dataset's training split, evaluate the requested
/// metrics, and write one metrics CSV per (metric, split) plus a run report.
/// Returns the number of failed cells (exit code 3 when nonzero).
pub fn cmd_benchmark(config: &ExperimentConfig, out_dir: &Path) -> Result<usize> {
    ensure_dir(out_dir)?;
    let models_dir = out_dir.join("models");
    ensure_dir(&models_dir)?;

    let datasets = load_collection(config)?;
    let splits = config.split.splits();
    let mut report = RunReport::new(config.seed);
    // (metric, split) -> dataset id -> model id -> value
    let mut tables: BTreeMap<(String, String), BTreeMap<String, BTreeMap<String, f64>>> =
        BTreeMap::new();

    for dataset in &datasets {
        for spec in &config.models {
            let fit_started = Instant::now();
            let fitted = match fit_estimator(spec, &dataset.train) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("fit failed for {}/{}: {e}", dataset.id, spec.id);
                    report.failures.push(CellFailure {
                        dataset: dataset.id.clone(),
                        model: spec.id.clone(),
                        context: "fit".into(),
                        error: e.to_string(),
                    });
                    continue;
                }
            };
            let fit_seconds = fit_started.elapsed().as_secs_f64();
            let model_path = models_dir.join(format!("{}__{}.json", dataset.id, spec.id));
            fitted.save(&model_path)?;

            for split_name in &splits {
                let split_data = match *split_name {
                    "train" => Some(&dataset.train),
                    _ => dataset.test.as_ref(),
                };
                let Some(split_data) = split_data else {
                    report.failures.push(CellFailure {
                        dataset: dataset.id.clone(),
                        model: spec.id.clone(),
                        context: format!("split:{split_name}"),
                        error: "dataset has no test split".into(),
                    });
                    continue;
                };
                let predict_started = Instant::now();
                let (q0, q1) = match fitted.predict_potential(&split_data.features) {
                    Ok(pair) => pair,
                    Err(e) => {
                        report.failures.push(CellFailure {
                            dataset: dataset.id.clone(),
                            model: spec.id.clone(),
                            context: format!("predict:{split_name}"),
                            error: e.to_string(),
                        });
                        continue;
                    }
                };
                let predict_seconds = predict_started.elapsed().as_secs_f64();

                let mut cell_metrics = BTreeMap::new();
                for metric in &config.metrics {
                    match compute_metric(*metric, split_data, &q0, &q1) {
                        Ok(value) => {
                            cell_metrics.insert(metric.to_string(), value);
                            tables
                                .entry((metric.to_string(), split_name.to_string()))
                                .or_default()
                                .entry(dataset.id.clone())
                                .or_default()
                                .insert(spec.id.clone(), value);
                        }
                        Err(e) => {
                            report.failures.push(CellFailure {
                                dataset: dataset.id.clone(),
                                model: spec.id.clone(),
                                context: format!("metric:{metric}@{split_name}"),
                                error: e.to_string(),
                            });
                        }
                    }
                }
                report.records.push(CellRecord {
                    dataset: dataset.id.clone(),
                    model: spec.id.clone(),
                    split: split_name.to_string(),
                    metrics: cell_metrics,
                    fit_seconds,
                    predict_seconds,
                    model_path: model_path.clone(),
                });
                println!(
                    "{} / {} [{}]: fit {:.3}s predict {:.3}s",
                    dataset.id, spec.id, split_name, fit_seconds, predict_seconds
                );
            }
        }
    }

    // Emit one table per (metric, split); only datasets with a complete model
    // row enter the table (failures stay in the report manifest).
    let model_ids: Vec<String> = config.models.iter().map(|m| m.id.clone()).collect();
    for ((metric, split), by_dataset) in &tables {
        let mut dataset_ids = Vec::new();
        let mut values = Vec::new();
        for dataset in &datasets {
            if let Some(row) = by_dataset.get(&dataset.id) {
                if model_ids.iter().all(|m| row.contains_key(m)) {
                    dataset_ids.push(dataset.id.clone());
                    values.extend(model_ids.iter().map(|m| row[m]));
                }
            }
        }
        if dataset_ids.is_empty() {
            continue;
        }
        let table = MetricsTable::new(dataset_ids, model_ids.clone(), values)?;
        let path = out_dir.join(format!("metrics_{metric}_{split}.csv"));
        table.write_csv(&path)?;
        println!("wrote {}", path.display());
    }

    write_json(&report, &out_dir.join("run_report.json"))?;
    if !report.failures.is_empty() {
        eprintln!("{} cell(s) failed; see run_report.json", report.failures.len());
    }
    Ok(report.failures.len())
}

/// Performance profiles for a metrics CSV; writes JSON and long-format CSV.
pub fn cmd_profile(
    metrics_csv: &Path,
    metric: Option<MetricKind>,
    out_dir: Option<&Path>,
) -> Result<()> {
    let table = MetricsTable::read_csv(metrics_csv)?;
    let curves = performance_profile(&table, PROFILE_EPSILON)?;
    let stem = metric.map(|m| m.to_string()).unwrap_or_else(|| {
        metrics_csv
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "metric".into())
    });
    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| metrics_csv.parent().unwrap_or(Path::new(".")).to_path_buf());
    ensure_dir(&dir)?;
    write_json(&curves, &dir.join(format!("profile_{stem}.json")))?;
    write_profile_csv(&curves, &dir.join(format!("profile_{stem}.csv")))?;
    for curve in &curves {
        let rho0 = curve.points.first().map(|p| p.rho).unwrap_or(0.0);
        println!("{:<24} best on {:>5.1}% of datasets", curve.model_id, rho0 * 100.0);
    }
    println!("wrote {}", dir.join(format!("profile_{stem}.json")).display());
    Ok(())
}

fn print_far_table(report: &FarReport) {
    let posthoc = report.posthoc.as_ref();
    println!(
        "Friedman aligned-ranks statistic = {:.3} (dof = {}), p-value = {:.6}",
        report.statistic, report.degrees_of_freedom, report.p_value
    );
    println!("{:<24} {:>10}   {:<12} H0", "Model", "FAR", "p_F-value");
    let mut order: Vec<usize> = (0..report.model_ids.len()).collect();
    order.sort_by(|&a, &b| {
        report.avg_aligned_ranks[a]
            .partial_cmp(&report.avg_aligned_ranks[b])
            .unwrap()
    });
    for idx in order {
        let id = &report.model_ids[idx];
        let rank = report.avg_aligned_ranks[idx];
        let comparison =
            posthoc.and_then(|p| p.comparisons.iter().find(|c| &c.model_id == id));
        match comparison {
            Some(c) => {
                let decision = if c.reject { "Reject" } else { "Failed to reject" };
                println!("{id:<24} {rank:>10.2}   {:<12.6} {decision}", c.p_adjusted);
            }
            None => println!("{id:<24} {rank:>10.2}   {:<12} -", "-"),
        }
    }
}

/// Aligned-ranks omnibus test + step-down post-hoc for a metrics CSV.
pub fn cmd_stats(metrics_csv: &Path, alpha: f64, out_dir: Option<&Path>) -> Result<()> {
    let table = MetricsTable::read_csv(metrics_csv)?;
    let report = finner_posthoc(far_test(&table)?, alpha)?;
    print_far_table(&report);
    let stem = metrics_csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "metrics".into());
    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| metrics_csv.parent().unwrap_or(Path::new(".")).to_path_buf());
    ensure_dir(&dir)?;
    let path = dir.join(format!("far_report_{stem}.json"));
    write_json(&report, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Model file spec for `train` (a ModelSpec without the id).
#[derive(Debug, Deserialize)]
struct TrainFileSpec {
    estimator: EstimatorKind,
    #[serde(default)]
    hessian_mode: HessianMode,
    #[serde(default)]
    train: TrainConfig,
}

pub fn cmd_train(
    data_csv: &Path,
    config_path: &Path,
    out_path: &Path,
    seed: Option<u64>,
) -> Result<()> {
    let text = fs::read_to_string(config_path).map_err(|e| Error::io(config_path, e))?;
    let spec: TrainFileSpec = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", config_path.display())))?;
    let mut train_config = spec.train;
    if let Some(seed) = seed {
        train_config.seed = seed;
    }
    train_config.validate()?;
    let dataset = read_csv(data_csv)?;
    let model_spec = ModelSpec {
        id: spec.estimator.to_string(),
        estimator: spec.estimator,
        hessian_mode: spec.hessian_mode,
        train: train_config,
    };
    let started = Instant::now();
    let fitted = fit_estimator(&model_spec, &dataset)?;
    println!(
        "fitted {} on {} rows x {} features in {:.3}s",
        spec.estimator,
        dataset.n_rows(),
        dataset.n_features(),
        started.elapsed().as_secs_f64()
    );
    fitted.save(out_path)?;
    println!("wrote {}", out_path.display());
    Ok(())
}

pub fn cmd_predict(model_path: &Path, data_csv: &Path, out_path: &Path) -> Result<()> {
    let model = EstimatorModel::load(model_path)?;
    let dataset = read_csv(data_csv)?;
    let (q0, q1) = model.predict_potential(&dataset.features)?;
    let mut writer = csv::WriterBuilder::new()
        .from_path(out_path)
        .map_err(|e| Error::from_csv(out_path, e))?;
    let io_err = |e: csv::Error| Error::Data(format!("write {}: {e}", out_path.display()));
    writer.write_record(["q0", "q1", "ite"]).map_err(io_err)?;
    for i in 0..q0.len() {
        writer
            .write_record([
                format!("{}", q0[i]),
                format!("{}", q1[i]),
                format!("{}", q1[i] - q0[i]),
            ])
            .map_err(io_err)?;
    }
    writer.flush().map_err(|e| Error::io(out_path, e))?;
    let ate = crate::causal::estimate_ate(&q0, &q1)?;
    println!("ATE estimate: {ate:.6}");
    println!("wrote {}", out_path.display());
    Ok(())
}
