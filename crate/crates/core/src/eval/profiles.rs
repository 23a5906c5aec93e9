//! Log10 performance profiles over a metric table.
//!
//! For dataset p and model s the performance ratio is
//! `r_ps = max(v_ps, eps) / max(min_s v_ps, eps)`; the profile of model s is
//! the cumulative fraction of datasets with `log10(r_ps) <= tau`, stepped
//! over the sorted distinct tau values (plus tau = 0).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::table::MetricsTable;

/// Floor applied to metric values before forming ratios, so that exact-zero
/// (perfect) scores keep finite ratios without disturbing the ordering.
pub const PROFILE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub tau: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub model_id: String,
    pub points: Vec<ProfilePoint>,
}

/// Profile curves for every model in the table, on a shared tau grid.
pub fn performance_profile(table: &MetricsTable, epsilon: f64) -> Result<Vec<ProfileCurve>> {
    table.validate()?;
    let (n, k) = (table.n_datasets(), table.n_models());
    if k < 2 {
        return Err(Error::Data(
            "performance profiles need at least two models".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Data("performance profiles need datasets".into()));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Config("profile epsilon must be positive".into()));
    }

    // log-ratios per (dataset, model)
    let mut tau = vec![0.0; n * k];
    for p in 0..n {
        let best = (0..k)
            .map(|s| table.value(p, s))
            .fold(f64::INFINITY, f64::min)
            .max(epsilon);
        for s in 0..k {
            tau[p * k + s] = (table.value(p, s).max(epsilon) / best).log10();
        }
    }

    // shared step grid: distinct tau values plus 0
    let mut grid: Vec<f64> = tau.iter().copied().chain(std::iter::once(0.0)).collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let curves = (0..k)
        .map(|s| {
            let mut ratios: Vec<f64> = (0..n).map(|p| tau[p * k + s]).collect();
            ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let points = grid
                .iter()
                .map(|&g| ProfilePoint {
                    tau: g,
                    rho: ratios.partition_point(|r| *r <= g) as f64 / n as f64,
                })
                .collect();
            ProfileCurve {
                model_id: table.model_ids[s].clone(),
                points,
            }
        })
        .collect();
    Ok(curves)
}

/// Long-format CSV (`model,tau,rho`) for external plotting.
pub fn write_profile_csv(curves: &[ProfileCurve], path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .from_path(path)
        .map_err(|e| Error::from_csv(path, e))?;
    let io_err = |e: csv::Error| Error::Data(format!("write {}: {e}", path.display()));
    writer.write_record(["model", "tau", "rho"]).map_err(io_err)?;
    for curve in curves {
        for pt in &curve.points {
            writer
                .write_record([
                    curve.model_id.clone(),
                    format!("{}", pt.tau),
                    format!("{}", pt.rho),
                ])
                .map_err(io_err)?;
        }
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
