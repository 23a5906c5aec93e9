//! Datasets x models metric tables (lower is better) with CSV I/O.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsTable {
    pub dataset_ids: Vec<String>,
    pub model_ids: Vec<String>,
    /// Row-major `datasets x models`.
    pub values: Vec<f64>,
}

impl MetricsTable {
    pub fn new(dataset_ids: Vec<String>, model_ids: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let table = MetricsTable {
            dataset_ids,
            model_ids,
            values,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn n_datasets(&self) -> usize {
        self.dataset_ids.len()
    }

    pub fn n_models(&self) -> usize {
        self.model_ids.len()
    }

    #[inline]
    pub fn value(&self, dataset: usize, model: usize) -> f64 {
        self.values[dataset * self.n_models() + model]
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.n_datasets() * self.n_models() {
            return Err(Error::Data(format!(
                "metrics table has {} values, expected {}x{}",
                self.values.len(),
                self.n_datasets(),
                self.n_models()
            )));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Data(format!(
                "metrics table cell {}/{} is {}, expected a finite nonnegative value",
                self.dataset_ids[i / self.n_models()],
                self.model_ids[i % self.n_models()],
                self.values[i]
            )));
        }
        Ok(())
    }

    /// CSV layout: `dataset_id` first, one column per model.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::WriterBuilder::new()
            .from_path(path)
            .map_err(|e| Error::from_csv(path, e))?;
        let mut header = vec!["dataset_id".to_string()];
        header.extend(self.model_ids.iter().cloned());
        let io_err = |e: csv::Error| Error::Data(format!("write {}: {e}", path.display()));
        writer.write_record(&header).map_err(io_err)?;
        for (i, id) in self.dataset_ids.iter().enumerate() {
            let mut record = vec![id.clone()];
            for j in 0..self.n_models() {
                record.push(format!("{}", self.value(i, j)));
            }
            writer.write_record(&record).map_err(io_err)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<MetricsTable> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)
            .map_err(|e| Error::from_csv(path, e))?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!("{e}"),
            })?
            .clone();
        if headers.is_empty() || &headers[0] != "dataset_id" {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: "first column must be dataset_id".into(),
            });
        }
        let model_ids: Vec<String> = headers.iter().skip(1).map(|s| s.to_string()).collect();
        let mut dataset_ids = Vec::new();
        let mut values = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = i as u64 + 2;
            let record = record.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("{e}"),
            })?;
            if record.len() != model_ids.len() + 1 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!(
                        "expected {} fields, found {}",
                        model_ids.len() + 1,
                        record.len()
                    ),
                });
            }
            dataset_ids.push(record[0].to_string());
            for cell in record.iter().skip(1) {
                let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("cannot parse metric value '{cell}'"),
                })?;
                values.push(v);
            }
        }
        MetricsTable::new(dataset_ids, model_ids, values)
    }
}
