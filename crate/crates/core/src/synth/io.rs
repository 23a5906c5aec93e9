//! Dataset CSV and metadata sidecar I/O.
//!
//! Schema: header `x0,...,x{d-1},t,y[,mu0,mu1]`, UTF-8, LF line endings.
//! Missing covariate cells are written as empty fields; reading accepts empty
//! or `NA`. Floats are written in shortest round-trip form, so a write/read
//! cycle reproduces every finite value exactly.

use std::fs;
use std::path::Path;

use crate::data::{Dataset, Matrix, MISSING};
use crate::error::{Error, Result};
use crate::synth::Sidecar;

fn fmt_float(v: f64) -> String {
    format!("{v}")
}

pub fn write_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let treatment = dataset
        .treatment
        .as_ref()
        .ok_or_else(|| Error::Data("CSV schema requires a treatment column".into()))?;
    let d = dataset.n_features();
    let mut writer = csv::WriterBuilder::new()
        .from_path(path)
        .map_err(|e| Error::from_csv(path, e))?;

    let mut header: Vec<String> = (0..d).map(|j| format!("x{j}")).collect();
    header.push("t".into());
    header.push("y".into());
    if dataset.has_ground_truth() {
        header.push("mu0".into());
        header.push("mu1".into());
    }
    writer
        .write_record(&header)
        .map_err(|e| Error::Data(format!("write {}: {e}", path.display())))?;

    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for r in 0..dataset.n_rows() {
        record.clear();
        for j in 0..d {
            let v = dataset.features.get(r, j);
            record.push(if v.is_nan() { String::new() } else { fmt_float(v) });
        }
        record.push(treatment[r].to_string());
        record.push(fmt_float(dataset.outcome[r]));
        if let (Some(mu0), Some(mu1)) = (&dataset.mu0, &dataset.mu1) {
            record.push(fmt_float(mu0[r]));
            record.push(fmt_float(mu1[r]));
        }
        writer
            .write_record(&record)
            .map_err(|e| Error::Data(format!("write {}: {e}", path.display())))?;
    }
    writer
        .flush()
        .map_err(|e| Error::io(path, e))
}

fn parse_cell(path: &Path, line: u64, name: &str, cell: &str) -> Result<f64> {
    cell.trim().parse::<f64>().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("cannot parse {name} value '{cell}'"),
    })
}

/// Read a dataset in the `x0..x{d-1},t,y[,mu0,mu1]` schema. Files without the
/// mu columns load with ground truth absent.
pub fn read_csv(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::from_csv(path, e))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("bad header: {e}"),
        })?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let bad_header = |message: String| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        message,
    };
    let d = headers.iter().take_while(|h| h.starts_with('x')).count();
    for (j, h) in headers.iter().take(d).enumerate() {
        if *h != format!("x{j}") {
            return Err(bad_header(format!(
                "expected covariate column 'x{j}', found '{h}'"
            )));
        }
    }
    let tail: Vec<&str> = headers[d..].iter().map(|s| s.as_str()).collect();
    let has_mu = match tail.as_slice() {
        ["t", "y"] => false,
        ["t", "y", "mu0", "mu1"] => true,
        other => {
            return Err(bad_header(format!(
                "expected trailing columns t,y[,mu0,mu1], found {other:?}"
            )))
        }
    };
    if d == 0 {
        return Err(bad_header("no covariate columns x0..".into()));
    }

    let mut values = Vec::new();
    let mut treatment = Vec::new();
    let mut outcome = Vec::new();
    let mut mu0 = Vec::new();
    let mut mu1 = Vec::new();

    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2; // 1-based, after the header
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{e}"),
        })?;
        if record.len() != headers.len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        for j in 0..d {
            let cell = record[j].trim();
            if cell.is_empty() || cell == "NA" {
                values.push(MISSING);
            } else {
                values.push(parse_cell(path, line, &format!("x{j}"), cell)?);
            }
        }
        let t = parse_cell(path, line, "t", &record[d])?;
        if t != 0.0 && t != 1.0 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("treatment must be 0 or 1, found {}", &record[d]),
            });
        }
        treatment.push(t as u8);
        let y = parse_cell(path, line, "y", &record[d + 1])?;
        if !y.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "outcome must be finite".into(),
            });
        }
        outcome.push(y);
        if has_mu {
            mu0.push(parse_cell(path, line, "mu0", &record[d + 2])?);
            mu1.push(parse_cell(path, line, "mu1", &record[d + 3])?);
        }
    }

    let n = outcome.len();
    Dataset::new(
        Matrix::new(n, d, values)?,
        Some(treatment),
        outcome,
        has_mu.then_some(mu0),
        has_mu.then_some(mu1),
    )
}

pub fn write_sidecar(sidecar: &Sidecar, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(sidecar)?;
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
