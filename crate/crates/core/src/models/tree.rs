//! Binary trees with axis-aligned `x[feature] <= threshold` tests.
//!
//! Classification trees are grown greedily on impurity decrease. Regression
//! trees (the weak learners of gradient boosting) are grown on first and
//! second derivatives of the loss with the usual
//! `½ [G_L²/(H_L+λ) + G_R²/(H_R+λ) − G²/(H+λ)] − γ` gain.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::impurity::{from_counts, Impurity};
use crate::matrix::Matrix;

/// Gains at or below this are treated as zero.
const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Class counts for classification trees, a single weight for
    /// regression trees.
    Leaf { value: Vec<f64> },
}

/// Arena of nodes; the root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn single_leaf(value: Vec<f64>) -> Self {
        Tree {
            nodes: vec![TreeNode::Leaf { value }],
        }
    }

    pub fn leaf_value(&self, x: &[f64]) -> &[f64] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if x[*feature] <= *threshold { *left } else { *right },
                TreeNode::Leaf { value } => return value,
            }
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    /// Longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        let mut max = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, d)) = stack.pop() {
            match &self.nodes[id] {
                TreeNode::Split { left, right, .. } => {
                    stack.push((*left, d + 1));
                    stack.push((*right, d + 1));
                }
                TreeNode::Leaf { .. } => max = max.max(d),
            }
        }
        max
    }

    pub fn leaves(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.iter().filter_map(|n| match n {
            TreeNode::Leaf { value } => Some(value.as_slice()),
            _ => None,
        })
    }

    fn placeholder(&mut self) -> usize {
        self.nodes.push(TreeNode::Leaf { value: Vec::new() });
        self.nodes.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

struct NodeStats {
    counts: Vec<f64>,
    total: f64,
    impurity: f64,
}

impl NodeStats {
    fn new(y: &[usize], k: usize, samples: &[usize], kind: Impurity) -> Self {
        let mut counts = vec![0.0; k];
        for &i in samples {
            counts[y[i]] += 1.0;
        }
        let total = samples.len() as f64;
        let impurity = from_counts(kind, &counts, total);
        NodeStats {
            counts,
            total,
            impurity,
        }
    }

    fn is_pure(&self) -> bool {
        self.counts.iter().filter(|&&c| c > 0.0).count() <= 1
    }
}

/// Midpoint of two consecutive distinct sorted values that still separates
/// them after rounding.
#[inline]
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = 0.5 * (lo + hi);
    if m < hi {
        m
    } else {
        lo
    }
}

fn sorted_values(x: &Matrix, samples: &[usize], feature: usize, buf: &mut Vec<(f64, usize)>) {
    buf.clear();
    buf.extend(samples.iter().map(|&i| (x.get(i, feature), i)));
    buf.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
}

/// Best midpoint threshold on one feature: largest gain, lowest threshold
/// among equal gains. `None` when the feature is constant on `samples`.
fn scan_feature(
    x: &Matrix,
    y: &[usize],
    samples: &[usize],
    feature: usize,
    kind: Impurity,
    parent: &NodeStats,
    buf: &mut Vec<(f64, usize)>,
) -> Option<SplitCandidate> {
    sorted_values(x, samples, feature, buf);
    let n = buf.len();
    let mut left = vec![0.0; parent.counts.len()];
    let mut right = parent.counts.clone();
    let mut best: Option<SplitCandidate> = None;
    for i in 0..n.saturating_sub(1) {
        let (v, idx) = buf[i];
        left[y[idx]] += 1.0;
        right[y[idx]] -= 1.0;
        let next = buf[i + 1].0;
        if v == next {
            continue;
        }
        let nl = (i + 1) as f64;
        let nr = parent.total - nl;
        let child = (nl / parent.total) * from_counts(kind, &left, nl)
            + (nr / parent.total) * from_counts(kind, &right, nr);
        let gain = parent.impurity - child;
        if best.is_none_or(|b| gain > b.gain) {
            best = Some(SplitCandidate {
                feature,
                threshold: midpoint(v, next),
                gain,
            });
        }
    }
    best
}

/// Gain of a fixed threshold; `None` if one side would be empty.
fn eval_threshold(
    x: &Matrix,
    y: &[usize],
    samples: &[usize],
    feature: usize,
    threshold: f64,
    kind: Impurity,
    parent: &NodeStats,
) -> Option<SplitCandidate> {
    let mut left = vec![0.0; parent.counts.len()];
    let mut nl = 0.0;
    for &i in samples {
        if x.get(i, feature) <= threshold {
            left[y[i]] += 1.0;
            nl += 1.0;
        }
    }
    let nr = parent.total - nl;
    if nl == 0.0 || nr == 0.0 {
        return None;
    }
    let right: Vec<f64> = parent.counts.iter().zip(&left).map(|(p, l)| p - l).collect();
    let child = (nl / parent.total) * from_counts(kind, &left, nl)
        + (nr / parent.total) * from_counts(kind, &right, nr);
    Some(SplitCandidate {
        feature,
        threshold,
        gain: parent.impurity - child,
    })
}

/// The `(feature, threshold)` with the largest impurity decrease among
/// `candidates`, scanning midpoints between consecutive distinct values.
/// Ties go to the lower feature index, then the lower threshold. Returns
/// `None` when no split decreases impurity.
pub fn best_split(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    samples: &[usize],
    candidates: &[usize],
    kind: Impurity,
) -> Option<SplitCandidate> {
    if samples.len() < 2 {
        return None;
    }
    let parent = NodeStats::new(y, n_classes, samples, kind);
    let mut sorted: Vec<usize> = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut buf = Vec::with_capacity(samples.len());
    let mut best: Option<SplitCandidate> = None;
    for f in sorted {
        if let Some(c) = scan_feature(x, y, samples, f, kind, &parent, &mut buf) {
            if best.is_none_or(|b| c.gain > b.gain) {
                best = Some(c);
            }
        }
    }
    best.filter(|b| b.gain > GAIN_EPS)
}

/// How thresholds are proposed at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Splitter {
    /// Every midpoint of every candidate feature.
    Best,
    /// One uniform draw in `[min, max)` per candidate feature.
    Random,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct GrowParams {
    pub impurity: Impurity,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub max_features: usize,
    pub splitter: Splitter,
}

/// Grows a classification tree on `samples` (repeats allowed, as in a
/// bootstrap draw). Leaves hold class counts. Impurity decrease weighted by
/// the node's share of samples is added to `importances`.
///
/// A node that is impure but admits only zero-gain splits is still split, so
/// a tree of unlimited depth always fits consistent data exactly (XOR being
/// the classic case where no single cut helps).
pub(crate) fn grow_classifier<R: Rng>(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    samples: Vec<usize>,
    params: &GrowParams,
    rng: &mut R,
    importances: &mut [f64],
) -> Tree {
    let d = x.cols();
    let n_root = samples.len().max(1) as f64;
    let min_split = params.min_samples_split.max(2);
    let mut tree = Tree { nodes: Vec::new() };
    let root = tree.placeholder();
    let mut stack = vec![(root, samples, 0usize)];
    let mut buf = Vec::new();
    let mut features: Vec<usize> = (0..d).collect();

    while let Some((id, node_samples, depth)) = stack.pop() {
        let stats = NodeStats::new(y, n_classes, &node_samples, params.impurity);
        let depth_ok = params.max_depth.is_none_or(|m| depth < m);
        let split = if stats.is_pure() || !depth_ok || node_samples.len() < min_split || d == 0 {
            None
        } else {
            let k = params.max_features.clamp(1, d);
            if k < d {
                features.sort_unstable();
                features.shuffle(rng);
            } else {
                features.sort_unstable();
            }
            let (primary, fallback) = features.split_at(k);
            let mut primary = primary.to_vec();
            primary.sort_unstable();
            let mut best = search(x, y, &node_samples, &primary, params, &stats, rng, &mut buf);
            if best.is_none() {
                // keep drawing features until one admits any split
                for &f in fallback {
                    best = search(x, y, &node_samples, &[f], params, &stats, rng, &mut buf);
                    if best.is_some() {
                        break;
                    }
                }
            }
            best
        };

        match split {
            Some(c) => {
                let (left, right): (Vec<usize>, Vec<usize>) = node_samples
                    .iter()
                    .partition(|&&i| x.get(i, c.feature) <= c.threshold);
                debug_assert!(!left.is_empty() && !right.is_empty());
                if c.gain > GAIN_EPS {
                    importances[c.feature] += node_samples.len() as f64 / n_root * c.gain;
                }
                let l = tree.placeholder();
                let r = tree.placeholder();
                tree.nodes[id] = TreeNode::Split {
                    feature: c.feature,
                    threshold: c.threshold,
                    left: l,
                    right: r,
                };
                stack.push((r, right, depth + 1));
                stack.push((l, left, depth + 1));
            }
            None => {
                tree.nodes[id] = TreeNode::Leaf {
                    value: stats.counts,
                };
            }
        }
    }
    tree
}

#[allow(clippy::too_many_arguments)]
fn search<R: Rng>(
    x: &Matrix,
    y: &[usize],
    samples: &[usize],
    features: &[usize],
    params: &GrowParams,
    stats: &NodeStats,
    rng: &mut R,
    buf: &mut Vec<(f64, usize)>,
) -> Option<SplitCandidate> {
    let mut best: Option<SplitCandidate> = None;
    for &f in features {
        let cand = match params.splitter {
            Splitter::Best => scan_feature(x, y, samples, f, params.impurity, stats, buf),
            Splitter::Random => {
                let (lo, hi) = samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                    let v = x.get(i, f);
                    (lo.min(v), hi.max(v))
                });
                if lo < hi {
                    let t = rng.random_range(lo..hi);
                    eval_threshold(x, y, samples, f, t, params.impurity, stats)
                } else {
                    None
                }
            }
        };
        if let Some(c) = cand {
            if best.is_none_or(|b| c.gain > b.gain) {
                best = Some(c);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct RegressionParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub lambda: f64,
    pub gamma: f64,
}

#[inline]
fn leaf_weight(g: f64, h: f64, lambda: f64) -> f64 {
    let denom = h + lambda;
    if denom > 0.0 {
        -g / denom
    } else {
        0.0
    }
}

#[inline]
fn score_term(g: f64, h: f64, lambda: f64) -> f64 {
    let denom = h + lambda;
    if denom > 0.0 {
        g * g / denom
    } else {
        0.0
    }
}

/// Row indices of every column sorted by value. Computed once per training
/// matrix and shared by all trees grown on it.
pub(crate) struct SortedColumns {
    order: Vec<Vec<usize>>,
}

impl SortedColumns {
    pub(crate) fn new(x: &Matrix) -> Self {
        let order = (0..x.cols())
            .map(|f| {
                let mut idx: Vec<usize> = (0..x.rows()).collect();
                idx.sort_by(|&a, &b| x.get(a, f).total_cmp(&x.get(b, f)));
                idx
            })
            .collect();
        SortedColumns { order }
    }
}

struct OpenNode {
    id: usize,
    g: f64,
    h: f64,
    count: usize,
    best: Option<SplitCandidate>,
}

impl OpenNode {
    fn new(id: usize) -> Self {
        OpenNode {
            id,
            g: 0.0,
            h: 0.0,
            count: 0,
            best: None,
        }
    }
}

const CLOSED: usize = usize::MAX;

/// Grows a regression tree on per-sample gradients and hessians over all
/// rows of `x`. Leaves hold the weight `-G / (H + λ)`; a split is kept only
/// if its regularized gain is positive.
///
/// The tree is grown one level at a time: each level makes a single pass
/// over every presorted column, updating running sums for all open nodes.
pub(crate) fn grow_regressor(
    x: &Matrix,
    sorted: &SortedColumns,
    grad: &[f64],
    hess: &[f64],
    params: &RegressionParams,
) -> Tree {
    let n = x.rows();
    let min_split = params.min_samples_split.max(2);
    let lambda = params.lambda;
    let mut tree = Tree { nodes: Vec::new() };
    let mut root = OpenNode::new(tree.placeholder());
    root.g = grad.iter().sum();
    root.h = hess.iter().sum();
    root.count = n;
    let mut open = vec![root];
    // position of each row's node in `open`
    let mut slot = vec![0usize; n];
    let mut depth = 0usize;

    while !open.is_empty() {
        let depth_ok = params.max_depth.is_none_or(|m| depth < m);
        let splittable: Vec<bool> = open.iter().map(|o| depth_ok && o.count >= min_split).collect();
        if splittable.iter().any(|&s| s) {
            let parent: Vec<f64> = open.iter().map(|o| score_term(o.g, o.h, lambda)).collect();
            let mut running: Vec<(f64, f64, f64)> = vec![(0.0, 0.0, f64::NAN); open.len()];
            for (f, order) in sorted.order.iter().enumerate() {
                running.iter_mut().for_each(|r| *r = (0.0, 0.0, f64::NAN));
                for &i in order {
                    let k = slot[i];
                    if k == CLOSED || !splittable[k] {
                        continue;
                    }
                    let v = x.get(i, f);
                    let (gl, hl, prev) = running[k];
                    // NaN marks "nothing seen yet"
                    if prev < v {
                        let o = &open[k];
                        let gain = 0.5
                            * (score_term(gl, hl, lambda) + score_term(o.g - gl, o.h - hl, lambda) - parent[k])
                            - params.gamma;
                        if open[k].best.is_none_or(|b| gain > b.gain) {
                            open[k].best = Some(SplitCandidate {
                                feature: f,
                                threshold: midpoint(prev, v),
                                gain,
                            });
                        }
                    }
                    running[k] = (gl + grad[i], hl + hess[i], v);
                }
            }
        }

        let mut next: Vec<OpenNode> = Vec::new();
        let mut first_child = vec![CLOSED; open.len()];
        for (k, o) in open.iter().enumerate() {
            match o.best.filter(|b| b.gain > GAIN_EPS) {
                Some(c) => {
                    let l = tree.placeholder();
                    let r = tree.placeholder();
                    tree.nodes[o.id] = TreeNode::Split {
                        feature: c.feature,
                        threshold: c.threshold,
                        left: l,
                        right: r,
                    };
                    first_child[k] = next.len();
                    next.push(OpenNode::new(l));
                    next.push(OpenNode::new(r));
                }
                None => {
                    tree.nodes[o.id] = TreeNode::Leaf {
                        value: vec![leaf_weight(o.g, o.h, lambda)],
                    };
                }
            }
        }
        for i in 0..n {
            let k = slot[i];
            if k == CLOSED {
                continue;
            }
            let base = first_child[k];
            if base == CLOSED {
                slot[i] = CLOSED;
                continue;
            }
            let c = open[k].best.expect("split nodes have a candidate");
            let child = if x.get(i, c.feature) <= c.threshold { base } else { base + 1 };
            slot[i] = child;
            next[child].g += grad[i];
            next[child].h += hess[i];
            next[child].count += 1;
        }
        open = next;
        depth += 1;
    }
    tree
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn col(values: &[f64]) -> Matrix {
        Matrix::from_rows(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    /// Exhaustive oracle: every midpoint, gain recomputed from scratch.
    fn brute_force(xs: &[f64], ys: &[usize]) -> (f64, f64) {
        let h = |idx: &[usize]| {
            let n = idx.len() as f64;
            let mut c = [0.0; 2];
            for &i in idx {
                c[ys[i]] += 1.0;
            }
            c.iter().filter(|&&v| v > 0.0).map(|&v| -(v / n) * (v / n).log2()).sum::<f64>()
        };
        let all: Vec<usize> = (0..xs.len()).collect();
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        let mut best = (f64::NAN, f64::NEG_INFINITY);
        for w in sorted.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&i| xs[i] <= t);
            let gain = h(&all)
                - l.len() as f64 / xs.len() as f64 * h(&l)
                - r.len() as f64 / xs.len() as f64 * h(&r);
            if gain > best.1 {
                best = (t, gain);
            }
        }
        best
    }

    #[test]
    fn four_point_split_matches_oracle() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [0, 0, 1, 1];
        let (t, g) = brute_force(&xs, &ys);
        assert_eq!((t, g), (2.5, 1.0));
        let s = best_split(&col(&xs), &ys, 2, &[0, 1, 2, 3], &[0], Impurity::Entropy).unwrap();
        assert_eq!((s.feature, s.threshold, s.gain), (0, 2.5, 1.0));
    }

    #[test]
    fn pure_and_single_sample_nodes_do_not_split() {
        let x = col(&[1.0, 2.0, 3.0]);
        assert!(best_split(&x, &[1, 1, 1], 2, &[0, 1, 2], &[0], Impurity::Gini).is_none());
        assert!(best_split(&x, &[0, 1, 1], 2, &[0], &[0], Impurity::Gini).is_none());
    }

    #[test]
    fn ties_prefer_lower_feature() {
        // both features separate the classes perfectly
        let x = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let s = best_split(&x, &[0, 1], 2, &[0, 1], &[1, 0], Impurity::Entropy).unwrap();
        assert_eq!(s.feature, 0);
    }

    #[test]
    fn adjacent_floats_still_separate() {
        let a = 1.0_f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let t = midpoint(a, b);
        assert!(a <= t && t < b);
    }

    fn grow(x: &Matrix, y: &[usize], max_depth: Option<usize>) -> Tree {
        let params = GrowParams {
            impurity: Impurity::Entropy,
            max_depth,
            min_samples_split: 2,
            max_features: x.cols(),
            splitter: Splitter::Best,
        };
        let mut imp = vec![0.0; x.cols()];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        grow_classifier(x, y, 2, (0..x.rows()).collect(), &params, &mut rng, &mut imp)
    }

    #[test]
    fn xor_needs_depth_two() {
        let x = Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let y = [0, 0, 1, 1];
        let t = grow(&x, &y, None);
        assert_eq!(t.depth(), 2);
        for i in 0..4 {
            let v = t.leaf_value(x.row(i));
            assert_eq!(v[y[i]], 1.0);
        }
    }

    #[test]
    fn depth_zero_is_a_single_leaf() {
        let x = col(&[1.0, 2.0, 3.0]);
        let t = grow(&x, &[0, 1, 1], Some(0));
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.leaf_value(&[0.0]), &[1.0, 2.0]);
    }

    #[test]
    fn regression_tree_leaf_weights() {
        // two groups with opposite gradients: one split, weights -G/(H+λ)
        let x = col(&[0.0, 0.0, 1.0, 1.0]);
        let g = [1.0, 1.0, -1.0, -1.0];
        let h = [1.0; 4];
        let params = RegressionParams {
            max_depth: Some(3),
            min_samples_split: 2,
            lambda: 1.0,
            gamma: 0.0,
        };
        let t = grow_regressor(&x, &SortedColumns::new(&x), &g, &h, &params);
        assert_eq!(t.n_leaves(), 2);
        assert_eq!(t.leaf_value(&[0.0]), &[-2.0 / 3.0]);
        assert_eq!(t.leaf_value(&[1.0]), &[2.0 / 3.0]);
    }

    #[test]
    fn gamma_prunes_weak_splits() {
        let x = col(&[0.0, 1.0]);
        let params = RegressionParams {
            max_depth: Some(3),
            min_samples_split: 2,
            lambda: 1.0,
            gamma: 10.0,
        };
        let t = grow_regressor(&x, &SortedColumns::new(&x), &[0.1, -0.1], &[1.0, 1.0], &params);
        assert_eq!(t.n_leaves(), 1);
    }
}
