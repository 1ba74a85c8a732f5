//! Gradient-boosted trees on the logistic loss.
//!
//! Each round fits a second-order regression tree to the gradients and
//! hessians of the current raw scores and adds it with learning rate `ψ`:
//! `f_t = f_{t-1} + ψ·h_t`. The recorded objective of round `t` is
//!
//! ```text
//! L(f_t) + γ·T_t + (λ/2)·‖ψ·s_t·w_t‖²
//! ```
//!
//! where `T_t` is the leaf count of the new tree, `w_t` its leaf weights and
//! `s_t ∈ (0, 1]` a step factor found by halving until the objective does not
//! exceed `L(f_{t-1}) + γ`, the value a single zero-valued leaf would reach.
//! If no step qualifies, the round keeps such a zero leaf, so the trace never
//! increases and the stage count always equals the number of rounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow_regressor, RegressionParams, SortedColumns, Tree};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

const MAX_HALVINGS: usize = 30;
const PRIOR_CLAMP: f64 = 1e-6;

/// One additive step: `f += learning_rate · scale · tree(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostStage {
    pub tree: Tree,
    pub scale: f64,
}

/// A single logistic booster producing the raw score of the positive class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Booster {
    /// Prior log-odds of the positive class.
    pub base_score: f64,
    pub learning_rate: f64,
    pub stages: Vec<BoostStage>,
    /// Training objective after each round.
    pub objective: Vec<f64>,
}

/// One stagewise update of a raw score.
///
/// ```
/// use fuzzids::models::boosting::apply_update;
///
/// assert!((apply_update(0.0, 0.1, 2.0) - 0.2).abs() < 1e-15);
/// ```
pub fn apply_update(previous: f64, learning_rate: f64, tree_output: f64) -> f64 {
    previous + learning_rate * tree_output
}

#[inline]
fn sigmoid(f: f64) -> f64 {
    if f >= 0.0 {
        1.0 / (1.0 + (-f).exp())
    } else {
        let e = f.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^f) − y·f`, computed without overflow.
#[inline]
fn log_loss(f: f64, y: f64) -> f64 {
    let softplus = if f > 0.0 {
        f + (-f).exp().ln_1p()
    } else {
        f.exp().ln_1p()
    };
    softplus - y * f
}

fn total_loss(f: &[f64], y: &[f64]) -> f64 {
    f.iter().zip(y).map(|(&fi, &yi)| log_loss(fi, yi)).sum()
}

impl Booster {
    pub fn raw_score(&self, row: &[f64]) -> f64 {
        self.stages.iter().fold(self.base_score, |f, s| {
            apply_update(f, self.learning_rate, s.scale * s.tree.leaf_value(row)[0])
        })
    }

    pub fn probability(&self, row: &[f64]) -> f64 {
        sigmoid(self.raw_score(row))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct BoostParams {
    pub n_rounds: usize,
    pub learning_rate: f64,
    pub tree: RegressionParams,
}

/// Fits one booster to 0/1 `targets`.
pub(crate) fn fit_booster(
    x: &Matrix,
    sorted: &SortedColumns,
    targets: &[f64],
    params: &BoostParams,
) -> Result<Booster> {
    let n = x.rows();
    if n == 0 {
        return Err(Error::Training("empty training set".into()));
    }
    let mean = targets.iter().sum::<f64>() / n as f64;
    let p = mean.clamp(PRIOR_CLAMP, 1.0 - PRIOR_CLAMP);
    let base_score = (p / (1.0 - p)).ln();
    let lr = params.learning_rate;
    let gamma = params.tree.gamma;
    let lambda = params.tree.lambda;

    let mut f = vec![base_score; n];
    let mut loss = total_loss(&f, targets);
    let mut stages = Vec::with_capacity(params.n_rounds);
    let mut objective = Vec::with_capacity(params.n_rounds);
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n];
    let mut trial = vec![0.0; n];

    for round in 1..=params.n_rounds {
        for i in 0..n {
            let p = sigmoid(f[i]);
            grad[i] = p - targets[i];
            hess[i] = p * (1.0 - p);
            if !grad[i].is_finite() || !hess[i].is_finite() {
                return Err(Error::Training(format!("non-finite gradient in boosting round {round}")));
            }
        }
        let tree = grow_regressor(x, sorted, &grad, &hess, &params.tree);
        let outputs: Vec<f64> = (0..n).map(|i| tree.leaf_value(x.row(i))[0]).collect();
        let leaves = tree.n_leaves() as f64;
        let sq_weights: f64 = tree.leaves().map(|w| w[0] * w[0]).sum();
        let budget = loss + gamma;

        let mut accepted = None;
        let mut scale = 1.0;
        for _ in 0..=MAX_HALVINGS {
            for i in 0..n {
                trial[i] = apply_update(f[i], lr, scale * outputs[i]);
            }
            let trial_loss = total_loss(&trial, targets);
            let obj = trial_loss + gamma * leaves + 0.5 * lambda * (lr * scale).powi(2) * sq_weights;
            if obj <= budget {
                accepted = Some((scale, trial_loss, obj));
                break;
            }
            scale *= 0.5;
        }

        match accepted {
            Some((scale, trial_loss, obj)) => {
                std::mem::swap(&mut f, &mut trial);
                loss = trial_loss;
                objective.push(obj);
                stages.push(BoostStage { tree, scale });
            }
            None => {
                objective.push(budget);
                stages.push(BoostStage {
                    tree: Tree::single_leaf(vec![0.0]),
                    scale: 1.0,
                });
            }
        }
    }

    Ok(Booster {
        base_score,
        learning_rate: lr,
        stages,
        objective,
    })
}

/// Binary tasks use one booster for class 1; more classes use one booster
/// per class against the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoosting {
    pub n_classes: usize,
    pub boosters: Vec<Booster>,
}

impl GradientBoosting {
    pub fn probabilities(&self, row: &[f64]) -> Vec<f64> {
        match self.n_classes {
            0 | 1 => vec![1.0; self.n_classes],
            2 => {
                let p = self.boosters[0].probability(row);
                vec![1.0 - p, p]
            }
            _ => {
                let ps: Vec<f64> = self.boosters.iter().map(|b| b.probability(row)).collect();
                let total: f64 = ps.iter().sum();
                ps.iter().map(|p| p / total).collect()
            }
        }
    }
}

pub(crate) fn fit_gbt(x: &Matrix, y: &[usize], n_classes: usize, params: &BoostParams) -> Result<GradientBoosting> {
    let targets_for = |k: usize| -> Vec<f64> { y.iter().map(|&c| f64::from(u8::from(c == k))).collect() };
    let sorted = SortedColumns::new(x);
    let boosters = match n_classes {
        0 | 1 => Vec::new(),
        2 => vec![fit_booster(x, &sorted, &targets_for(1), params)?],
        _ => (0..n_classes)
            .into_par_iter()
            .map(|k| fit_booster(x, &sorted, &targets_for(k), params))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(GradientBoosting { n_classes, boosters })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n_rounds: usize, learning_rate: f64, depth: usize) -> BoostParams {
        BoostParams {
            n_rounds,
            learning_rate,
            tree: RegressionParams {
                max_depth: Some(depth),
                min_samples_split: 2,
                lambda: 1.0,
                gamma: 0.0,
            },
        }
    }

    fn separable() -> (Matrix, Vec<f64>) {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 19.0]).collect();
        let y = (0..20).map(|i| f64::from(u8::from(i >= 10))).collect();
        (Matrix::from_rows(&rows).unwrap(), y)
    }

    #[test]
    fn loss_is_stable_at_extremes() {
        assert!((log_loss(0.0, 1.0) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(log_loss(800.0, 1.0).abs() < 1e-12);
        assert!((log_loss(-800.0, 1.0) - 800.0).abs() < 1e-9);
    }

    #[test]
    fn separable_data_is_fit_exactly() {
        let (x, y) = separable();
        let b = fit_booster(&x, &SortedColumns::new(&x), &y, &params(50, 0.1, 1)).unwrap();
        assert_eq!(b.stages.len(), 50);
        for (i, &yi) in y.iter().enumerate() {
            assert_eq!(b.probability(x.row(i)) >= 0.5, yi == 1.0);
        }
    }

    #[test]
    fn objective_never_increases() {
        let (x, y) = separable();
        let b = fit_booster(&x, &SortedColumns::new(&x), &y, &params(30, 1.0, 3)).unwrap();
        for w in b.objective.windows(2) {
            assert!(w[1] <= w[0] + 1e-6, "{w:?}");
        }
    }

    #[test]
    fn zero_learning_rate_keeps_base_score() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let y: Vec<f64> = (0..10).map(|i| f64::from(u8::from(i < 7))).collect();
        let b = fit_booster(&x, &SortedColumns::new(&x), &y, &params(5, 0.0, 2)).unwrap();
        assert_eq!(b.stages.len(), 5);
        for i in 0..10 {
            assert_eq!(b.raw_score(x.row(i)), b.base_score);
            assert!(b.probability(x.row(i)) > 0.5);
        }
    }
}
