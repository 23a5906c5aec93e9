//! Friedman Aligned-Ranks omnibus test and the Finner step-down post-hoc
//! procedure against the best-ranked (control) model.
//!
//! Observations are aligned by subtracting each dataset's row mean, then all
//! `n * k` aligned values are ranked jointly (average ranks on ties).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::special::{chi2_sf, norm_sf};
use crate::eval::table::MetricsTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarReport {
    pub model_ids: Vec<String>,
    pub n_datasets: usize,
    /// Rank sum per model divided by the number of datasets.
    pub avg_aligned_ranks: Vec<f64>,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub posthoc: Option<FinnerPosthoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinnerPosthoc {
    /// Model with the lowest average aligned rank; it has no comparison row.
    pub control: String,
    pub alpha: f64,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub model_id: String,
    pub z: f64,
    pub p_unadjusted: f64,
    pub p_adjusted: f64,
    pub reject: bool,
}

/// Average ranks (1-based) with ties sharing their mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Omnibus aligned-ranks test over a `datasets x models` table.
pub fn far_test(table: &MetricsTable) -> Result<FarReport> {
    table.validate()?;
    let (n, k) = (table.n_datasets(), table.n_models());
    if n < 2 || k < 2 {
        return Err(Error::Data(format!(
            "aligned-ranks test needs >= 2 datasets and >= 2 models, got {n} x {k}"
        )));
    }

    let mut aligned = vec![0.0; n * k];
    for i in 0..n {
        let mean: f64 = (0..k).map(|j| table.value(i, j)).sum::<f64>() / k as f64;
        for j in 0..k {
            aligned[i * k + j] = table.value(i, j) - mean;
        }
    }
    let ranks = average_ranks(&aligned);

    let mut model_rank_sums = vec![0.0; k];
    let mut dataset_rank_sums = vec![0.0; n];
    for i in 0..n {
        for j in 0..k {
            let r = ranks[i * k + j];
            model_rank_sums[j] += r;
            dataset_rank_sums[i] += r;
        }
    }

    let (nf, kf) = (n as f64, k as f64);
    let total = kf * nf; // number of ranked cells
    let numerator = (kf - 1.0)
        * (model_rank_sums.iter().map(|r| r * r).sum::<f64>()
            - (kf * nf * nf / 4.0) * (total + 1.0) * (total + 1.0));
    let denominator = total * (total + 1.0) * (2.0 * total + 1.0) / 6.0
        - dataset_rank_sums.iter().map(|r| r * r).sum::<f64>() / kf;

    // a fully tied table drives both terms to zero; report no evidence
    let statistic = if denominator > 1e-9 {
        (numerator / denominator).max(0.0)
    } else {
        0.0
    };
    let p_value = chi2_sf(statistic, k - 1)?;

    Ok(FarReport {
        model_ids: table.model_ids.clone(),
        n_datasets: n,
        avg_aligned_ranks: model_rank_sums.iter().map(|r| r / nf).collect(),
        statistic,
        degrees_of_freedom: k - 1,
        p_value,
        posthoc: None,
    })
}

/// Finner step-down adjustment. Input p-values may be in any order; the
/// output keeps that order. `m` comparisons yield exponents `m / j` for the
/// j-th smallest p-value, with a running maximum enforcing monotonicity.
pub fn finner_adjust(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].partial_cmp(&p_values[b]).unwrap());
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (pos, &i) in order.iter().enumerate() {
        let j = (pos + 1) as f64;
        let raw = 1.0 - (1.0 - p_values[i]).powf(m as f64 / j);
        running = running.max(raw.min(1.0));
        adjusted[i] = running;
    }
    adjusted
}

/// Complete a [`FarReport`] with pairwise comparisons against the control
/// (lowest average aligned rank), Finner-adjusted at level `alpha`.
pub fn finner_posthoc(report: FarReport, alpha: f64) -> Result<FarReport> {
    if report.posthoc.is_some() {
        return Ok(report);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Config(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let k = report.model_ids.len();
    let n = report.n_datasets as f64;
    let control = report
        .avg_aligned_ranks
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .expect("far report has models");

    let se = ((k as f64) * (n * k as f64 + 1.0) / (6.0 * n)).sqrt();
    let others: Vec<usize> = (0..k).filter(|&j| j != control).collect();
    let z: Vec<f64> = others
        .iter()
        .map(|&j| (report.avg_aligned_ranks[j] - report.avg_aligned_ranks[control]) / se)
        .collect();
    let p_unadj: Vec<f64> = z.iter().map(|&z| 2.0 * norm_sf(z.abs())).collect();
    let p_adj = finner_adjust(&p_unadj);

    let comparisons = others
        .iter()
        .enumerate()
        .map(|(idx, &j)| Comparison {
            model_id: report.model_ids[j].clone(),
            z: z[idx],
            p_unadjusted: p_unadj[idx],
            p_adjusted: p_adj[idx],
            reject: p_adj[idx] <= alpha,
        })
        .collect();

    let mut completed = report;
    completed.posthoc = Some(FinnerPosthoc {
        control: completed.model_ids[control].clone(),
        alpha,
        comparisons,
    });
    Ok(completed)
}
