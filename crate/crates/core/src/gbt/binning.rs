//! Quantile binning of raw feature values for histogram-based training.
//!
//! Bins are computed once from the training set. Each bin's boundary is the
//! largest value it contains, so routing a raw value `v` left at a split on
//! boundary `b` (`v <= b`) agrees exactly with routing its bin index.

use rayon::prelude::*;

use crate::data::{is_missing, Matrix};

/// Bin index reserved for missing values; missing cells are never binned and
/// route by the split's default direction instead.
pub const MISSING_BIN: u16 = u16::MAX;

/// Per-feature quantile bin boundaries.
#[derive(Debug, Clone)]
pub struct BinMapper {
    /// Ascending upper boundaries per feature; empty means the feature has no
    /// finite values and cannot be split on.
    boundaries: Vec<Vec<f64>>,
    /// Whether the training data contained missing cells for the feature.
    has_missing: Vec<bool>,
}

impl BinMapper {
    /// Compute per-feature bins from the quantiles of the finite values.
    ///
    /// A feature with at most `max_bins` distinct finite values gets one bin
    /// per distinct value (exact mode).
    pub fn fit(features: &Matrix, max_bins: usize) -> BinMapper {
        let n_features = features.n_cols();
        let per_feature: Vec<(Vec<f64>, bool)> = (0..n_features)
            .into_par_iter()
            .map(|f| {
                let mut vals: Vec<f64> = (0..features.n_rows())
                    .map(|r| features.get(r, f))
                    .filter(|v| !is_missing(*v))
                    .collect();
                let missing = vals.len() < features.n_rows();
                vals.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
                (Self::boundaries_from_sorted(&vals, max_bins), missing)
            })
            .collect();
        let (boundaries, has_missing) = per_feature.into_iter().unzip();
        BinMapper {
            boundaries,
            has_missing,
        }
    }

    fn boundaries_from_sorted(sorted: &[f64], max_bins: usize) -> Vec<f64> {
        if sorted.is_empty() {
            return Vec::new();
        }
        let mut distinct: Vec<f64> = sorted.to_vec();
        distinct.dedup();
        if distinct.len() <= max_bins {
            return distinct;
        }
        // Quantile cuts: boundary j is the value at rank ceil((j+1) n / k) - 1,
        // so equal-frequency bins when the data has no heavy duplicates.
        let n = sorted.len();
        let mut cuts: Vec<f64> = (1..=max_bins)
            .map(|j| sorted[(j * n).div_ceil(max_bins) - 1])
            .collect();
        cuts.dedup();
        cuts
    }

    pub fn n_features(&self) -> usize {
        self.boundaries.len()
    }

    /// Number of bins for a feature (0 for unsplittable features).
    pub fn n_bins(&self, feature: usize) -> usize {
        self.boundaries[feature].len()
    }

    /// Upper boundary (largest contained value) of a bin.
    pub fn boundary(&self, feature: usize, bin: usize) -> f64 {
        self.boundaries[feature][bin]
    }

    pub fn has_missing(&self, feature: usize) -> bool {
        self.has_missing[feature]
    }

    /// Bin index for a raw value; `None` for missing. Values above the last
    /// boundary clamp into the last bin.
    pub fn bin_value(&self, feature: usize, v: f64) -> Option<u16> {
        if is_missing(v) {
            return None;
        }
        let bounds = &self.boundaries[feature];
        debug_assert!(!bounds.is_empty(), "binning a value of an unbinned feature");
        let idx = bounds.partition_point(|b| *b < v).min(bounds.len() - 1);
        Some(idx as u16)
    }

    /// Quantize a full matrix (training-time path).
    pub fn bin_matrix(&self, features: &Matrix) -> BinnedMatrix {
        let n_rows = features.n_rows();
        let n_features = features.n_cols();
        let mut bins = vec![MISSING_BIN; n_rows * n_features];
        bins.par_chunks_mut(n_rows)
            .enumerate()
            .for_each(|(f, column)| {
                if self.boundaries[f].is_empty() {
                    return; // fully-missing feature: leave the sentinel
                }
                for (r, slot) in column.iter_mut().enumerate() {
                    if let Some(b) = self.bin_value(f, features.get(r, f)) {
                        *slot = b;
                    }
                }
            });
        BinnedMatrix {
            n_rows,
            n_features,
            bins,
        }
    }
}

/// Feature-major quantized matrix (`[feature * n_rows + row]`).
#[derive(Debug, Clone)]
pub struct BinnedMatrix {
    n_rows: usize,
    n_features: usize,
    bins: Vec<u16>,
}

impl BinnedMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    #[inline]
    pub fn column(&self, feature: usize) -> &[u16] {
        &self.bins[feature * self.n_rows..(feature + 1) * self.n_rows]
    }
}
