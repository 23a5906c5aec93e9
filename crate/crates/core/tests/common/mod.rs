//! Shared test oracles, kept independent of the library's histogram path:
//! an exhaustive exact-enumeration split finder / tree grower / booster, and
//! a within-row permutation oracle for the aligned-ranks test.

// each test binary uses a different subset of these oracles
#![allow(dead_code)]

use cxgb::data::{is_missing, Dataset, Matrix};
use cxgb::eval::{far_test, MetricsTable};
use cxgb::gbt::{GradHess, Objective, TrainConfig, Tree, TreeNode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSplit {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
    pub default_left: bool,
}

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

fn sums_over(rows: &[usize], gh: &GradHess) -> (Vec<f64>, Vec<f64>) {
    let k = gh.n_outputs;
    let mut g = vec![0.0; k];
    let mut h = vec![0.0; k];
    for &r in rows {
        for out in 0..k {
            g[out] += gh.g[r * k + out];
            h[out] += gh.h[r * k + out];
        }
    }
    (g, h)
}

/// Exhaustive best split over raw feature values: every feature, every
/// distinct value as threshold ("<= goes left"), both missing placements.
/// Same tie policy as the engine: strictly-greater gain replaces, features
/// and thresholds scanned ascending, missing-left evaluated first.
pub fn oracle_best_split(
    features: &Matrix,
    rows: &[usize],
    gh: &GradHess,
    config: &TrainConfig,
) -> Option<OracleSplit> {
    let k = gh.n_outputs;
    let lambda = config.reg_lambda;
    let (pg, ph) = sums_over(rows, gh);
    let parent_score = score_sum(&pg, &ph, lambda);
    let node_mass: f64 = ph.iter().sum();
    let mut best: Option<OracleSplit> = None;

    for f in 0..features.n_cols() {
        let mut finite: Vec<(f64, usize)> = Vec::new();
        let mut missing_rows: Vec<usize> = Vec::new();
        for &r in rows {
            let v = features.get(r, f);
            if is_missing(v) {
                missing_rows.push(r);
            } else {
                finite.push((v, r));
            }
        }
        if finite.is_empty() {
            continue;
        }
        let (mg, mh) = if missing_rows.is_empty() {
            (vec![0.0; k], vec![0.0; k])
        } else {
            sums_over(&missing_rows, gh)
        };
        finite.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let mut cum_g = vec![0.0; k];
        let mut cum_h = vec![0.0; k];
        let mut cum_count = 0usize;
        for i in 0..finite.len() {
            let (v, r) = finite[i];
            for out in 0..k {
                cum_g[out] += gh.g[r * k + out];
                cum_h[out] += gh.h[r * k + out];
            }
            cum_count += 1;
            // candidate thresholds sit at the last row of each value group
            if i + 1 < finite.len() && finite[i + 1].0 == v {
                continue;
            }
            for missing_left in [true, false] {
                if !missing_left && missing_rows.is_empty() {
                    break;
                }
                let left_count = cum_count + if missing_left { missing_rows.len() } else { 0 };
                let right_count = rows.len() - left_count;
                if left_count == 0 || right_count == 0 {
                    continue;
                }
                let mut lg = vec![0.0; k];
                let mut lh = vec![0.0; k];
                let mut rg = vec![0.0; k];
                let mut rh = vec![0.0; k];
                let mut left_mass = 0.0;
                for out in 0..k {
                    lg[out] = cum_g[out] + if missing_left { mg[out] } else { 0.0 };
                    lh[out] = cum_h[out] + if missing_left { mh[out] } else { 0.0 };
                    rg[out] = pg[out] - lg[out];
                    rh[out] = ph[out] - lh[out];
                    left_mass += lh[out];
                }
                let right_mass = node_mass - left_mass;
                if left_mass < config.min_child_weight || right_mass < config.min_child_weight {
                    continue;
                }
                let gain = 0.5
                    * (score_sum(&lg, &lh, lambda) + score_sum(&rg, &rh, lambda) - parent_score);
                if best.is_none_or(|b| gain > b.gain) {
                    best = Some(OracleSplit {
                        feature: f,
                        threshold: v,
                        gain,
                        default_left: missing_left,
                    });
                }
            }
        }
    }
    best
}

fn leaf_values(g: &[f64], h: &[f64], config: &TrainConfig) -> Vec<f64> {
    g.iter()
        .zip(h)
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

pub struct OracleGrown {
    pub tree: Tree,
    pub leaf_of_row: Vec<usize>,
}

/// Depth-wise exact grower mirroring the engine's policy (BFS node order,
/// stable partitions, same leaf formula) on raw values.
pub fn oracle_grow(features: &Matrix, gh: &GradHess, config: &TrainConfig) -> OracleGrown {
    let n = features.n_rows();
    let mut leaf_of_row = vec![0usize; n];
    let mut nodes: Vec<TreeNode> = vec![TreeNode::Leaf { values: Vec::new() }];
    let mut queue: std::collections::VecDeque<(usize, usize, Vec<usize>)> =
        std::collections::VecDeque::new();
    queue.push_back((0, 0, (0..n).collect()));

    while let Some((node_idx, depth, rows)) = queue.pop_front() {
        let candidate = if depth < config.max_depth && rows.len() >= 2 {
            oracle_best_split(features, &rows, gh, config)
        } else {
            None
        };
        match candidate {
            Some(c) if c.gain > config.min_split_gain => {
                let mut left_rows = Vec::new();
                let mut right_rows = Vec::new();
                for &r in &rows {
                    let v = features.get(r, c.feature);
                    let go_left = if is_missing(v) {
                        c.default_left
                    } else {
                        v <= c.threshold
                    };
                    if go_left {
                        left_rows.push(r);
                    } else {
                        right_rows.push(r);
                    }
                }
                let left = nodes.len();
                nodes.push(TreeNode::Leaf { values: Vec::new() });
                let right = nodes.len();
                nodes.push(TreeNode::Leaf { values: Vec::new() });
                nodes[node_idx] = TreeNode::Split {
                    feature: c.feature,
                    threshold: c.threshold,
                    default_left: c.default_left,
                    left,
                    right,
                };
                queue.push_back((left, depth + 1, left_rows));
                queue.push_back((right, depth + 1, right_rows));
            }
            _ => {
                let (g, h) = sums_over(&rows, gh);
                for &r in &rows {
                    leaf_of_row[r] = node_idx;
                }
                nodes[node_idx] = TreeNode::Leaf {
                    values: leaf_values(&g, &h, config),
                };
            }
        }
    }
    OracleGrown {
        tree: Tree { nodes },
        leaf_of_row,
    }
}

/// Exact-enumeration booster: the reference implementation of `fit`.
pub fn oracle_fit(dataset: &Dataset, objective: &dyn Objective, config: &TrainConfig) -> Vec<Tree> {
    let n = dataset.n_rows();
    let k = objective.n_outputs();
    let mut preds = vec![config.base_score; n * k];
    let mut gh = GradHess::zeros(n, k);
    let mut trees = Vec::with_capacity(config.n_estimators);
    for _ in 0..config.n_estimators {
        objective.grad_hess(&preds, &mut gh);
        let grown = oracle_grow(&dataset.features, &gh, config);
        for r in 0..n {
            if let TreeNode::Leaf { values } = &grown.tree.nodes[grown.leaf_of_row[r]] {
                for out in 0..k {
                    preds[r * k + out] += values[out];
                }
            }
        }
        trees.push(grown.tree);
    }
    trees
}

/// p-value of the aligned-ranks statistic under within-row permutations.
pub fn far_permutation_p(table: &MetricsTable, draws: usize, seed: u64) -> f64 {
    let observed = far_test(table).unwrap().statistic;
    let (n, k) = (table.n_datasets(), table.n_models());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = table.values.clone();
    let mut at_least = 0usize;
    for _ in 0..draws {
        for i in 0..n {
            for j in (1..k).rev() {
                let l = rng.random_range(0..=j);
                values.swap(i * k + j, i * k + l);
            }
        }
        let permuted = MetricsTable::new(
            table.dataset_ids.clone(),
            table.model_ids.clone(),
            values.clone(),
        )
        .unwrap();
        if far_test(&permuted).unwrap().statistic >= observed - 1e-12 {
            at_least += 1;
        }
    }
    (at_least + 1) as f64 / (draws + 1) as f64
}

/// Random dataset + derivatives for oracle comparisons: continuous values,
/// a share of missing cells, one or two outputs.
pub fn random_split_problem(
    seed: u64,
    min_rows: usize,
    max_rows: usize,
    max_features: usize,
) -> (Matrix, GradHess, TrainConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(min_rows..=max_rows);
    let d = rng.random_range(1..=max_features);
    let k = if rng.random::<bool>() { 2 } else { 1 };
    let mut values = Vec::with_capacity(n * d);
    for _ in 0..n * d {
        if rng.random::<f64>() < 0.15 {
            values.push(f64::NAN);
        } else {
            values.push(rng.random::<f64>() * 10.0 - 5.0);
        }
    }
    let features = Matrix::new(n, d, values).unwrap();
    let mut gh = GradHess::zeros(n, k);
    for i in 0..n * k {
        gh.g[i] = rng.random::<f64>() * 4.0 - 2.0;
        gh.h[i] = rng.random::<f64>() * 2.4 + 0.1;
    }
    let config = TrainConfig {
        reg_lambda: if seed.is_multiple_of(2) { 1.0 } else { 0.0 },
        min_child_weight: 0.0,
        min_split_gain: 0.0,
        learning_rate: 1.0,
        max_depth: 3,
        ..Default::default()
    };
    (features, gh, config)
}

/// Gain of one concrete (feature, threshold, missing-direction) candidate on
/// a row set, computed directly from raw values.
pub fn candidate_gain(
    features: &Matrix,
    rows: &[usize],
    gh: &GradHess,
    config: &TrainConfig,
    feature: usize,
    threshold: f64,
    default_left: bool,
) -> f64 {
    let k = gh.n_outputs;
    let lambda = config.reg_lambda;
    let mut left_rows = Vec::new();
    let mut right_rows = Vec::new();
    for &r in rows {
        let v = features.get(r, feature);
        let go_left = if is_missing(v) {
            default_left
        } else {
            v <= threshold
        };
        if go_left {
            left_rows.push(r);
        } else {
            right_rows.push(r);
        }
    }
    let (pg, ph) = sums_over(rows, gh);
    let (lg, lh) = sums_over(&left_rows, gh);
    let mut rg = vec![0.0; k];
    let mut rh = vec![0.0; k];
    for out in 0..k {
        rg[out] = pg[out] - lg[out];
        rh[out] = ph[out] - lh[out];
    }
    0.5 * (score_sum(&lg, &lh, lambda) + score_sum(&rg, &rh, lambda) - score_sum(&pg, &ph, lambda))
}

/// Compare a histogram-grown tree against the exact-enumeration tree.
///
/// Where both agree on (feature, threshold, default direction) the walk
/// recurses; where they diverge the two chosen splits must carry the same
/// gain within `tol` (distinct features can induce the identical partition,
/// tying mathematically and differing only in float summation order).
pub fn assert_trees_equivalent(
    features: &Matrix,
    gh: &GradHess,
    config: &TrainConfig,
    hist: &Tree,
    exact: &Tree,
    tol: f64,
    context: &str,
) {
    fn split_of(tree: &Tree, idx: usize) -> Option<(usize, f64, bool, usize, usize)> {
        match &tree.nodes[idx] {
            TreeNode::Split {
                feature,
                threshold,
                default_left,
                left,
                right,
            } => Some((*feature, *threshold, *default_left, *left, *right)),
            TreeNode::Leaf { .. } => None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        features: &Matrix,
        gh: &GradHess,
        config: &TrainConfig,
        hist: &Tree,
        exact: &Tree,
        a: usize,
        b: usize,
        rows: Vec<usize>,
        tol: f64,
        context: &str,
    ) {
        match (split_of(hist, a), split_of(exact, b)) {
            (None, None) => {
                let (TreeNode::Leaf { values: va }, TreeNode::Leaf { values: vb }) =
                    (&hist.nodes[a], &exact.nodes[b])
                else {
                    unreachable!()
                };
                for (x, y) in va.iter().zip(vb) {
                    assert!((x - y).abs() <= tol, "{context}: leaf value {x} vs {y}");
                }
            }
            (Some((fa, ta, da, la, ra)), Some((fb, tb, db, lb, rb))) => {
                if fa == fb && ta == tb && da == db {
                    let mut left_rows = Vec::new();
                    let mut right_rows = Vec::new();
                    for &r in &rows {
                        let v = features.get(r, fa);
                        let go_left = if is_missing(v) { da } else { v <= ta };
                        if go_left {
                            left_rows.push(r);
                        } else {
                            right_rows.push(r);
                        }
                    }
                    walk(features, gh, config, hist, exact, la, lb, left_rows, tol, context);
                    walk(features, gh, config, hist, exact, ra, rb, right_rows, tol, context);
                } else {
                    let ga = candidate_gain(features, &rows, gh, config, fa, ta, da);
                    let gb = candidate_gain(features, &rows, gh, config, fb, tb, db);
                    assert!(
                        (ga - gb).abs() <= tol,
                        "{context}: diverging splits with different quality: \
                         hist (f{fa} @ {ta}, gain {ga}) vs exact (f{fb} @ {tb}, gain {gb})"
                    );
                }
            }
            (hist_split, _) => {
                // one side split, the other stayed a leaf: permitted only for
                // knife-edge gains at the split threshold
                let (f, t, d) = match hist_split {
                    Some((f, t, d, _, _)) => (f, t, d),
                    None => {
                        let (f, t, d, _, _) = split_of(exact, b).unwrap();
                        (f, t, d)
                    }
                };
                let g = candidate_gain(features, &rows, gh, config, f, t, d);
                assert!(
                    (g - config.min_split_gain).abs() <= tol,
                    "{context}: split/leaf disagreement with decisive gain {g}"
                );
            }
        }
    }

    let rows: Vec<usize> = (0..features.n_rows()).collect();
    walk(features, gh, config, hist, exact, 0, 0, rows, tol, context);
}
