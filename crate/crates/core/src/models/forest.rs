//! Random forests and extremely randomized trees.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow_classifier, GrowParams, Tree};
use super::argmax;
use crate::matrix::Matrix;
use crate::rng::{component_rng, Domain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
    pub n_classes: usize,
    /// Mean impurity decrease per feature, each tree normalized to sum 1.
    pub importances: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub seed: u64,
    pub grow: GrowParams,
}

/// Tree `t` draws from its own stream, so the forest does not depend on how
/// rayon schedules the work.
pub(crate) fn fit_forest(x: &Matrix, y: &[usize], n_classes: usize, params: &ForestParams) -> Forest {
    let n = x.rows();
    let d = x.cols();
    let fitted: Vec<(Tree, Vec<f64>)> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = component_rng(params.seed, Domain::Forest, t as u64);
            let samples: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let mut imp = vec![0.0; d];
            let tree = grow_classifier(x, y, n_classes, samples, &params.grow, &mut rng, &mut imp);
            let total: f64 = imp.iter().sum();
            if total > 0.0 {
                imp.iter_mut().for_each(|v| *v /= total);
            }
            (tree, imp)
        })
        .collect();

    let mut importances = vec![0.0; d];
    let mut trees = Vec::with_capacity(fitted.len());
    for (tree, imp) in fitted {
        for (acc, v) in importances.iter_mut().zip(&imp) {
            *acc += v;
        }
        trees.push(tree);
    }
    let m = trees.len().max(1) as f64;
    importances.iter_mut().for_each(|v| *v /= m);
    Forest {
        trees,
        n_classes,
        importances,
    }
}

impl Forest {
    /// Fraction of trees voting for each class. Each tree votes for the
    /// majority class of its leaf, ties to the lowest id.
    pub fn vote_fractions(&self, row: &[f64]) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes];
        for tree in &self.trees {
            votes[argmax(tree.leaf_value(row))] += 1.0;
        }
        let m = self.trees.len() as f64;
        votes.iter_mut().for_each(|v| *v /= m);
        votes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::impurity::Impurity;
    use crate::models::tree::Splitter;

    fn toy() -> (Matrix, Vec<usize>) {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, ((i * 7) % 11) as f64]).collect();
        let y = (0..40).map(|i| usize::from(i >= 20)).collect();
        (Matrix::from_rows(&rows).unwrap(), y)
    }

    fn params(splitter: Splitter, bootstrap: bool) -> ForestParams {
        ForestParams {
            n_trees: 8,
            bootstrap,
            seed: 11,
            grow: GrowParams {
                impurity: Impurity::Gini,
                max_depth: None,
                min_samples_split: 2,
                max_features: 1,
                splitter,
            },
        }
    }

    #[test]
    fn same_seed_same_forest() {
        let (x, y) = toy();
        for s in [Splitter::Best, Splitter::Random] {
            let a = fit_forest(&x, &y, 2, &params(s, true));
            let b = fit_forest(&x, &y, 2, &params(s, true));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn importances_sum_to_one() {
        let (x, y) = toy();
        let f = fit_forest(&x, &y, 2, &params(Splitter::Random, false));
        let s: f64 = f.importances.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(f.importances[0] > f.importances[1]);
    }

    #[test]
    fn vote_fractions_sum_to_one() {
        let (x, y) = toy();
        let f = fit_forest(&x, &y, 2, &params(Splitter::Best, true));
        for i in 0..x.rows() {
            let v = f.vote_fractions(x.row(i));
            assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
