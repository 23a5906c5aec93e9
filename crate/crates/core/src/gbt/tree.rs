//! Decision trees with vector-valued leaves under a single shared structure.

use serde::{Deserialize, Serialize};

use crate::data::is_missing;

/// A tree node in the flat node array. Children are indices into the array;
/// node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        /// Bin upper boundary: rows with `value <= threshold` go left.
        threshold: f64,
        /// Where rows with a missing split feature are routed.
        default_left: bool,
        left: usize,
        right: usize,
    },
    Leaf {
        /// One value per output, already scaled by the learning rate.
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    /// Single-leaf tree.
    pub fn leaf(values: Vec<f64>) -> Tree {
        Tree {
            nodes: vec![TreeNode::Leaf { values }],
        }
    }

    /// Index of the leaf a raw feature row lands in.
    pub fn leaf_index(&self, row: &[f64]) -> usize {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Leaf { .. } => return idx,
                TreeNode::Split {
                    feature,
                    threshold,
                    default_left,
                    left,
                    right,
                } => {
                    let v = row[*feature];
                    let go_left = if is_missing(v) {
                        *default_left
                    } else {
                        v <= *threshold
                    };
                    idx = if go_left { *left } else { *right };
                }
            }
        }
    }

    /// Add this tree's leaf vector for `row` into `out`.
    pub fn accumulate(&self, row: &[f64], out: &mut [f64]) {
        if let TreeNode::Leaf { values } = &self.nodes[self.leaf_index(row)] {
            for (o, v) in out.iter_mut().zip(values) {
                *o += v;
            }
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    /// Depth of the deepest leaf (root alone has depth 0).
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], idx: usize, d: usize) -> usize {
            match &nodes[idx] {
                TreeNode::Leaf { .. } => d,
                TreeNode::Split { left, right, .. } => {
                    walk(nodes, *left, d + 1).max(walk(nodes, *right, d + 1))
                }
            }
        }
        walk(&self.nodes, 0, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::MISSING;

    fn stump() -> Tree {
        Tree {
            nodes: vec![
                TreeNode::Split {
                    feature: 0,
                    threshold: 1.5,
                    default_left: false,
                    left: 1,
                    right: 2,
                },
                TreeNode::Leaf { values: vec![-1.0] },
                TreeNode::Leaf { values: vec![1.0] },
            ],
        }
    }

    #[test]
    fn routes_by_threshold() {
        let t = stump();
        assert_eq!(t.leaf_index(&[1.5]), 1); // boundary value goes left
        assert_eq!(t.leaf_index(&[1.6]), 2);
    }

    #[test]
    fn missing_follows_default_direction() {
        let t = stump();
        assert_eq!(t.leaf_index(&[MISSING]), 2);
    }

    #[test]
    fn accumulate_adds_leaf_vector() {
        let t = stump();
        let mut out = vec![0.5];
        t.accumulate(&[0.0], &mut out);
        assert_eq!(out, vec![-0.5]);
    }

    #[test]
    fn depth_and_leaves() {
        let t = stump();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(Tree::leaf(vec![0.0, 0.0]).depth(), 0);
    }
}
