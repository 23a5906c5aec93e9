//! Core data containers: dense feature matrices and labeled datasets.
//!
//! Missing feature values are carried in-memory as `f64::NAN`; everything
//! else (outcomes, ground-truth means) must be finite.

use crate::error::{Error, Result};

/// Returns true if `v` is the reserved missing marker.
#[inline]
pub fn is_missing(v: f64) -> bool {
    v.is_nan()
}

/// The in-memory missing marker for feature cells.
pub const MISSING: f64 = f64::NAN;

/// Dense row-major matrix of feature values.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
}

impl Matrix {
    pub fn new(n_rows: usize, n_cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_rows * n_cols {
            return Err(Error::Data(format!(
                "matrix buffer has {} values, expected {}x{}",
                values.len(),
                n_rows,
                n_cols
            )));
        }
        Ok(Matrix {
            n_rows,
            n_cols,
            values,
        })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Matrix {
            n_rows,
            n_cols,
            values: vec![0.0; n_rows * n_cols],
        }
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.values[row * self.n_cols + col] = v;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Copy of this matrix with one extra column appended on the right.
    pub fn with_appended_column(&self, col: &[f64]) -> Result<Matrix> {
        if col.len() != self.n_rows {
            return Err(Error::Data(format!(
                "appended column has {} entries, matrix has {} rows",
                col.len(),
                self.n_rows
            )));
        }
        let mut values = Vec::with_capacity(self.n_rows * (self.n_cols + 1));
        for (r, &extra) in col.iter().enumerate() {
            values.extend_from_slice(self.row(r));
            values.push(extra);
        }
        Matrix::new(self.n_rows, self.n_cols + 1, values)
    }
}

/// A supervised dataset: covariates with optional missing cells, an outcome,
/// an optional binary treatment, and optional ground-truth potential-outcome
/// means used only for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Matrix,
    pub treatment: Option<Vec<u8>>,
    pub outcome: Vec<f64>,
    pub mu0: Option<Vec<f64>>,
    pub mu1: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(
        features: Matrix,
        treatment: Option<Vec<u8>>,
        outcome: Vec<f64>,
        mu0: Option<Vec<f64>>,
        mu1: Option<Vec<f64>>,
    ) -> Result<Self> {
        let ds = Dataset {
            features,
            treatment,
            outcome,
            mu0,
            mu1,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn n_rows(&self) -> usize {
        self.features.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    pub fn has_ground_truth(&self) -> bool {
        self.mu0.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_rows();
        if self.outcome.len() != n {
            return Err(Error::Data(format!(
                "outcome has {} entries, features have {} rows",
                self.outcome.len(),
                n
            )));
        }
        if let Some(i) = self.outcome.iter().position(|y| !y.is_finite()) {
            return Err(Error::Data(format!("non-finite outcome at row {i}")));
        }
        if let Some(t) = &self.treatment {
            if t.len() != n {
                return Err(Error::Data(format!(
                    "treatment has {} entries, features have {n} rows",
                    t.len()
                )));
            }
            if let Some(i) = t.iter().position(|&v| v > 1) {
                return Err(Error::Data(format!(
                    "treatment at row {i} is {}, expected 0 or 1",
                    t[i]
                )));
            }
        }
        if self.mu0.is_some() != self.mu1.is_some() {
            return Err(Error::Data(
                "mu0 and mu1 must be present together or not at all".into(),
            ));
        }
        for (name, mu) in [("mu0", &self.mu0), ("mu1", &self.mu1)] {
            if let Some(mu) = mu {
                if mu.len() != n {
                    return Err(Error::Data(format!(
                        "{name} has {} entries, features have {n} rows",
                        mu.len()
                    )));
                }
                if let Some(i) = mu.iter().position(|v| !v.is_finite()) {
                    return Err(Error::Data(format!("non-finite {name} at row {i}")));
                }
            }
        }
        Ok(())
    }

    /// Rows with t == arm, as a new dataset (keeps ground truth if present).
    pub fn subset_by_treatment(&self, arm: u8) -> Result<Dataset> {
        let t = self
            .treatment
            .as_ref()
            .ok_or_else(|| Error::Data("dataset has no treatment vector".into()))?;
        let rows: Vec<usize> = (0..self.n_rows()).filter(|&i| t[i] == arm).collect();
        self.select_rows(&rows)
    }

    /// Dataset restricted to the given row indices (in the given order).
    pub fn select_rows(&self, rows: &[usize]) -> Result<Dataset> {
        let d = self.n_features();
        let mut values = Vec::with_capacity(rows.len() * d);
        for &r in rows {
            values.extend_from_slice(self.features.row(r));
        }
        let pick = |v: &Vec<f64>| rows.iter().map(|&r| v[r]).collect::<Vec<f64>>();
        Dataset::new(
            Matrix::new(rows.len(), d, values)?,
            self.treatment
                .as_ref()
                .map(|t| rows.iter().map(|&r| t[r]).collect()),
            pick(&self.outcome),
            self.mu0.as_ref().map(pick),
            self.mu1.as_ref().map(pick),
        )
    }
}
