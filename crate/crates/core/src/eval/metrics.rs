//! Causal-effect metrics over true and predicted potential-outcome means.

use crate::error::{Error, Result};

fn check_lengths(mu0: &[f64], mu1: &[f64], q0: &[f64], q1: &[f64]) -> Result<usize> {
    let n = mu0.len();
    if n == 0 {
        return Err(Error::Data("metrics need at least one row".into()));
    }
    if mu1.len() != n || q0.len() != n || q1.len() != n {
        return Err(Error::Data(format!(
            "metric vectors must share a length, got {}/{}/{}/{}",
            mu0.len(),
            mu1.len(),
            q0.len(),
            q1.len()
        )));
    }
    Ok(n)
}

/// Absolute error in the average treatment effect:
/// `|mean(mu1 - mu0) - mean(q1 - q0)|`.
pub fn abs_error_ate(mu0: &[f64], mu1: &[f64], q0: &[f64], q1: &[f64]) -> Result<f64> {
    let n = check_lengths(mu0, mu1, q0, q1)? as f64;
    let true_ate: f64 = mu1.iter().zip(mu0).map(|(a, b)| a - b).sum::<f64>() / n;
    let pred_ate: f64 = q1.iter().zip(q0).map(|(a, b)| a - b).sum::<f64>() / n;
    Ok((true_ate - pred_ate).abs())
}

/// Precision in the estimation of heterogeneous effects: the mean squared
/// difference between true and predicted per-row effects. No square root.
pub fn pehe(mu0: &[f64], mu1: &[f64], q0: &[f64], q1: &[f64]) -> Result<f64> {
    let n = check_lengths(mu0, mu1, q0, q1)? as f64;
    let sum: f64 = (0..mu0.len())
        .map(|i| {
            let diff = (mu1[i] - mu0[i]) - (q1[i] - q0[i]);
            diff * diff
        })
        .sum();
    Ok(sum / n)
}
