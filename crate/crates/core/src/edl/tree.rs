use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::logistic::Sample;
use super::{TrainError, FEATURE_COUNT};

/// Binary decision tree over the feature vector. Rows with
/// `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode {
    Leaf {
        leaf: bool,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(label: bool) -> Self {
        TreeNode::Leaf { leaf: label }
    }

    pub fn split(feature: usize, threshold: f64, left: TreeNode, right: TreeNode) -> Self {
        TreeNode::Split {
            feature,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn predict(&self, x: &[f64; FEATURE_COUNT]) -> bool {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { leaf } => return *leaf,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    // Out-of-range feature indices come only from hand-edited
                    // model files; treat the value as 0.
                    let v = x.get(*feature).copied().unwrap_or(0.0);
                    node = if v <= *threshold { left } else { right };
                }
            }
        }
    }

    /// Number of split levels; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeHyper {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeHyper {
    fn default() -> Self {
        TreeHyper {
            max_depth: 4,
            min_leaf: 2,
        }
    }
}

fn gini(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn best_split(rows: &[&Sample], min_leaf: usize) -> Option<Candidate> {
    let n = rows.len();
    let total_pos = rows.iter().filter(|(_, y)| *y).count();
    let parent = gini(total_pos, n);
    let mut best: Option<Candidate> = None;
    let mut order: Vec<usize> = (0..n).collect();

    for feature in 0..FEATURE_COUNT {
        order.sort_by(|&a, &b| rows[a].0[feature].total_cmp(&rows[b].0[feature]));
        let mut left_pos = 0usize;
        for k in 1..n {
            if rows[order[k - 1]].1 {
                left_pos += 1;
            }
            let lo = rows[order[k - 1]].0[feature];
            let hi = rows[order[k]].0[feature];
            if lo == hi || k < min_leaf || n - k < min_leaf {
                continue;
            }
            let weighted = (k as f64 * gini(left_pos, k)
                + (n - k) as f64 * gini(total_pos - left_pos, n - k))
                / n as f64;
            let gain = parent - weighted;
            // strict improvement: ties keep the lower feature, then lower threshold
            if best.as_ref().map_or(gain > 1e-12, |b| gain > b.gain + 1e-12) {
                best = Some(Candidate {
                    feature,
                    threshold: lo + (hi - lo) / 2.0,
                    gain,
                });
            }
        }
    }
    best
}

fn grow(rows: Vec<&Sample>, depth: usize, hyper: &TreeHyper) -> TreeNode {
    let pos = rows.iter().filter(|(_, y)| *y).count();
    let majority = pos * 2 > rows.len();
    if pos == 0 || pos == rows.len() || depth >= hyper.max_depth || rows.len() < 2 * hyper.min_leaf.max(1) {
        return TreeNode::leaf(majority);
    }
    let Some(split) = best_split(&rows, hyper.min_leaf.max(1)) else {
        return TreeNode::leaf(majority);
    };
    let (left, right): (Vec<&Sample>, Vec<&Sample>) = rows
        .into_iter()
        .partition(|(x, _)| x[split.feature] <= split.threshold);
    TreeNode::split(
        split.feature,
        split.threshold,
        grow(left, depth + 1, hyper),
        grow(right, depth + 1, hyper),
    )
}

/// Greedy CART with Gini impurity. Leaves take the majority label (ties go
/// to `false`).
pub fn train_tree(samples: &[Sample], hyper: &TreeHyper) -> Result<TreeNode, TrainError> {
    let positives = samples.iter().filter(|(_, y)| *y).count();
    if positives == 0 || positives == samples.len() {
        return Err(TrainError::DegenerateData);
    }
    Ok(grow(samples.iter().collect(), 0, hyper))
}
