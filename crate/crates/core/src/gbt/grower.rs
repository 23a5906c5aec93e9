//! Depth-wise tree growth from per-feature gradient histograms.
//!
//! Histograms accumulate per feature in parallel; each feature's accumulation
//! runs sequentially in node row order and candidates are reduced in fixed
//! feature order, so the grown tree does not depend on thread count.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::gbt::binning::{BinMapper, BinnedMatrix, MISSING_BIN};
use crate::gbt::config::TrainConfig;
use crate::gbt::objective::GradHess;
use crate::gbt::tree::{Tree, TreeNode};

/// One feature's histogram at one node: per-bin derivative sums per output
/// plus row counts. Missing rows are not binned; their mass is the node total
/// minus the histogram total.
struct FeatureHist {
    g: Vec<f64>,
    h: Vec<f64>,
    count: Vec<u32>,
}

impl FeatureHist {
    fn with_bins(n_bins: usize, n_outputs: usize) -> Self {
        FeatureHist {
            g: vec![0.0; n_bins * n_outputs],
            h: vec![0.0; n_bins * n_outputs],
            count: vec![0; n_bins],
        }
    }

    fn n_bins(&self) -> usize {
        self.count.len()
    }
}

struct Histograms {
    feats: Vec<FeatureHist>,
    n_outputs: usize,
}

impl Histograms {
    fn new(mapper: &BinMapper, n_outputs: usize) -> Self {
        let feats = (0..mapper.n_features())
            .map(|f| FeatureHist::with_bins(mapper.n_bins(f), n_outputs))
            .collect();
        Histograms { feats, n_outputs }
    }

    fn build(&mut self, binned: &BinnedMatrix, gh: &GradHess, rows: &[u32]) {
        let k = self.n_outputs;
        self.feats.par_iter_mut().enumerate().for_each(|(f, fh)| {
            if fh.n_bins() == 0 {
                return;
            }
            fh.g.fill(0.0);
            fh.h.fill(0.0);
            fh.count.fill(0);
            let col = binned.column(f);
            for &r in rows {
                let b = col[r as usize];
                if b == MISSING_BIN {
                    continue;
                }
                let bi = b as usize * k;
                let ri = r as usize * k;
                for out in 0..k {
                    fh.g[bi + out] += gh.g[ri + out];
                    fh.h[bi + out] += gh.h[ri + out];
                }
                fh.count[b as usize] += 1;
            }
        });
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    bin: usize,
    gain: f64,
    default_left: bool,
}

/// `g^2 / (h + lambda)`, defined as 0 when the denominator vanishes.
#[inline]
fn score(g: f64, h: f64, lambda: f64) -> f64 {
    let denom = h + lambda;
    if denom > 0.0 {
        g * g / denom
    } else {
        0.0
    }
}

fn score_sum(g: &[f64], h: &[f64], lambda: f64) -> f64 {
    g.iter().zip(h).map(|(&g, &h)| score(g, h, lambda)).sum()
}

/// Best candidate for one feature, or `None` if no valid split exists.
///
/// Both placements of the node's missing rows are evaluated per bin; ties
/// between placements keep the left direction, and among bins the lowest
/// wins (the scan replaces only on strictly larger gain).
fn best_feature_split(
    fh: &FeatureHist,
    feature: usize,
    node_g: &[f64],
    node_h: &[f64],
    node_count: usize,
    config: &TrainConfig,
) -> Option<Candidate> {
    let k = node_g.len();
    let n_bins = fh.n_bins();
    if n_bins == 0 {
        return None;
    }
    let lambda = config.reg_lambda;

    let mut finite_g = vec![0.0; k];
    let mut finite_h = vec![0.0; k];
    let mut finite_count = 0u32;
    for b in 0..n_bins {
        for out in 0..k {
            finite_g[out] += fh.g[b * k + out];
            finite_h[out] += fh.h[b * k + out];
        }
        finite_count += fh.count[b];
    }
    let missing_count = node_count - finite_count as usize;
    if finite_count == 0 {
        return None; // feature fully missing at this node
    }
    // With no missing rows the residual is exactly zero by definition; avoid
    // injecting float cancellation noise into the gain.
    let (missing_g, missing_h): (Vec<f64>, Vec<f64>) = if missing_count == 0 {
        (vec![0.0; k], vec![0.0; k])
    } else {
        (
            (0..k).map(|o| node_g[o] - finite_g[o]).collect(),
            (0..k).map(|o| node_h[o] - finite_h[o]).collect(),
        )
    };
    let parent_score = score_sum(node_g, node_h, lambda);
    let node_mass: f64 = node_h.iter().sum();

    let mut cum_g = vec![0.0; k];
    let mut cum_h = vec![0.0; k];
    let mut cum_count = 0usize;
    let mut best: Option<Candidate> = None;

    let mut lg = vec![0.0; k];
    let mut lh = vec![0.0; k];
    let mut rg = vec![0.0; k];
    let mut rh = vec![0.0; k];

    for b in 0..n_bins {
        for out in 0..k {
            cum_g[out] += fh.g[b * k + out];
            cum_h[out] += fh.h[b * k + out];
        }
        cum_count += fh.count[b] as usize;
        // canonical cuts keep at least one finite row on the left; the
        // missing-only-left partition is the mirror of missing-right at the
        // top cut and would only duplicate its gain
        if cum_count == 0 {
            continue;
        }

        // directions: missing left first, right only when missing rows exist
        for missing_left in [true, false] {
            if !missing_left && missing_count == 0 {
                break;
            }
            let left_count = cum_count + if missing_left { missing_count } else { 0 };
            let right_count = node_count - left_count;
            if left_count == 0 || right_count == 0 {
                continue;
            }
            let mut left_mass = 0.0;
            for out in 0..k {
                lg[out] = cum_g[out] + if missing_left { missing_g[out] } else { 0.0 };
                lh[out] = cum_h[out] + if missing_left { missing_h[out] } else { 0.0 };
                rg[out] = node_g[out] - lg[out];
                rh[out] = node_h[out] - lh[out];
                left_mass += lh[out];
            }
            let right_mass = node_mass - left_mass;
            if left_mass < config.min_child_weight || right_mass < config.min_child_weight {
                continue;
            }
            let gain = 0.5
                * (score_sum(&lg, &lh, lambda) + score_sum(&rg, &rh, lambda) - parent_score);
            if best.is_none_or(|c| gain > c.gain) {
                best = Some(Candidate {
                    feature,
                    bin: b,
                    gain,
                    default_left: missing_left,
                });
            }
        }
    }
    best
}

fn find_best_split(
    hist: &Histograms,
    node_g: &[f64],
    node_h: &[f64],
    node_count: usize,
    config: &TrainConfig,
) -> Option<Candidate> {
    let per_feature: Vec<Option<Candidate>> = hist
        .feats
        .par_iter()
        .enumerate()
        .map(|(f, fh)| best_feature_split(fh, f, node_g, node_h, node_count, config))
        .collect();
    // sequential reduce in feature order: lower feature index wins ties
    let mut best: Option<Candidate> = None;
    for cand in per_feature.into_iter().flatten() {
        if best.is_none_or(|c| cand.gain > c.gain) {
            best = Some(cand);
        }
    }
    best
}

fn node_totals(gh: &GradHess, rows: &[u32]) -> (Vec<f64>, Vec<f64>) {
    let k = gh.n_outputs;
    let mut g = vec![0.0; k];
    let mut h = vec![0.0; k];
    for &r in rows {
        let ri = r as usize * k;
        for out in 0..k {
            g[out] += gh.g[ri + out];
            h[out] += gh.h[ri + out];
        }
    }
    (g, h)
}

/// Optimal leaf vector `-G / (H + lambda)` scaled by the learning rate.
fn leaf_values(node_g: &[f64], node_h: &[f64], config: &TrainConfig) -> Vec<f64> {
    node_g
        .iter()
        .zip(node_h)
        .map(|(&g, &h)| {
            let denom = h + config.reg_lambda;
            if denom > 0.0 {
                -g / denom * config.learning_rate
            } else {
                0.0
            }
        })
        .collect()
}

pub(crate) struct GrownTree {
    pub tree: Tree,
    /// Leaf node index per input row.
    pub leaf_of_row: Vec<usize>,
}

pub(crate) fn grow(
    binned: &BinnedMatrix,
    mapper: &BinMapper,
    gh: &GradHess,
    config: &TrainConfig,
) -> GrownTree {
    let n = binned.n_rows();
    let mut rows: Vec<u32> = (0..n as u32).collect();
    let mut leaf_of_row = vec![0usize; n];
    let mut nodes: Vec<TreeNode> = vec![TreeNode::Leaf { values: Vec::new() }];
    let mut hist = Histograms::new(mapper, gh.n_outputs);
    let mut scratch: Vec<u32> = Vec::with_capacity(n);

    // (node index, depth, row range)
    let mut queue: VecDeque<(usize, usize, usize, usize)> = VecDeque::new();
    queue.push_back((0, 0, 0, n));

    while let Some((node_idx, depth, start, end)) = queue.pop_front() {
        let node_rows = &rows[start..end];
        let (node_g, node_h) = node_totals(gh, node_rows);

        let candidate = if depth < config.max_depth && end - start >= 2 {
            hist.build(binned, gh, node_rows);
            find_best_split(&hist, &node_g, &node_h, node_rows.len(), config)
        } else {
            None
        };

        match candidate {
            Some(c) if c.gain > config.min_split_gain => {
                let col = binned.column(c.feature);
                let cut = c.bin as u16;
                scratch.clear();
                let mut write = start;
                for i in start..end {
                    let r = rows[i];
                    let b = col[r as usize];
                    let go_left = if b == MISSING_BIN {
                        c.default_left
                    } else {
                        b <= cut
                    };
                    if go_left {
                        rows[write] = r;
                        write += 1;
                    } else {
                        scratch.push(r);
                    }
                }
                rows[write..end].copy_from_slice(&scratch);

                let left = nodes.len();
                nodes.push(TreeNode::Leaf { values: Vec::new() });
                let right = nodes.len();
                nodes.push(TreeNode::Leaf { values: Vec::new() });
                nodes[node_idx] = TreeNode::Split {
                    feature: c.feature,
                    threshold: mapper.boundary(c.feature, c.bin),
                    default_left: c.default_left,
                    left,
                    right,
                };
                queue.push_back((left, depth + 1, start, write));
                queue.push_back((right, depth + 1, write, end));
            }
            _ => {
                for &r in &rows[start..end] {
                    leaf_of_row[r as usize] = node_idx;
                }
                nodes[node_idx] = TreeNode::Leaf {
                    values: leaf_values(&node_g, &node_h, config),
                };
            }
        }
    }

    GrownTree {
        tree: Tree { nodes },
        leaf_of_row,
    }
}

/// Grow a single tree from quantized features and precomputed derivatives.
pub fn grow_tree(
    binned: &BinnedMatrix,
    mapper: &BinMapper,
    gh: &GradHess,
    config: &TrainConfig,
) -> Tree {
    grow(binned, mapper, gh, config).tree
}
