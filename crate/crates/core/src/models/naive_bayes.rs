//! Naive Bayes with Gaussian or Laplace-smoothed categorical likelihoods.
//!
//! Priors are `N_k / N`. The joint likelihood is the product of per-feature
//! likelihoods, accumulated as a sum of logs. Classes with no training rows
//! are left out of prediction and always score 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NbVariant {
    #[default]
    Gaussian,
    /// Each distinct feature value is a category; `P(v | k) = (n_kv + α) /
    /// (N_k + α·V)` with `V` distinct values seen in training.
    CategoricalLaplace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Likelihood {
    Gaussian {
        /// `[class][feature]`
        means: Vec<Vec<f64>>,
        variances: Vec<Vec<f64>>,
    },
    CategoricalLaplace {
        alpha: f64,
        /// Sorted distinct values per feature.
        values: Vec<Vec<f64>>,
        /// `[class][feature][value]`
        counts: Vec<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayes {
    pub class_counts: Vec<usize>,
    pub priors: Vec<f64>,
    pub likelihood: Likelihood,
}

pub(crate) fn fit_nb(
    x: &Matrix,
    y: &[usize],
    n_classes: usize,
    variant: NbVariant,
    alpha: f64,
) -> Result<(NaiveBayes, Vec<String>)> {
    let n = x.rows();
    let d = x.cols();
    if n == 0 {
        return Err(Error::Training("empty training set".into()));
    }
    let mut class_counts = vec![0usize; n_classes];
    for &c in y {
        class_counts[c] += 1;
    }
    let priors: Vec<f64> = class_counts.iter().map(|&c| c as f64 / n as f64).collect();
    let warnings = class_counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == 0)
        .map(|(k, _)| format!("class {k} absent from training data; excluded from prediction"))
        .collect();

    let likelihood = match variant {
        NbVariant::Gaussian => {
            let mut means = vec![vec![0.0; d]; n_classes];
            let mut variances = vec![vec![0.0; d]; n_classes];
            for i in 0..n {
                let row = x.row(i);
                for (m, v) in means[y[i]].iter_mut().zip(row) {
                    *m += v;
                }
            }
            for (k, m) in means.iter_mut().enumerate() {
                if class_counts[k] > 0 {
                    m.iter_mut().for_each(|v| *v /= class_counts[k] as f64);
                }
            }
            for (i, &k) in y.iter().enumerate().take(n) {
                let row = x.row(i);
                for j in 0..d {
                    let diff = row[j] - means[k][j];
                    variances[k][j] += diff * diff;
                }
            }
            for (k, var) in variances.iter_mut().enumerate() {
                let nk = class_counts[k].max(1) as f64;
                var.iter_mut().for_each(|v| *v = (*v / nk).max(VARIANCE_FLOOR));
            }
            Likelihood::Gaussian { means, variances }
        }
        NbVariant::CategoricalLaplace => {
            let values: Vec<Vec<f64>> = (0..d)
                .map(|j| {
                    let mut col = x.column(j);
                    col.sort_by(f64::total_cmp);
                    col.dedup();
                    col
                })
                .collect();
            let mut counts: Vec<Vec<Vec<f64>>> = (0..n_classes)
                .map(|_| values.iter().map(|v| vec![0.0; v.len()]).collect())
                .collect();
            for i in 0..n {
                for (j, &v) in x.row(i).iter().enumerate() {
                    if let Ok(pos) = values[j].binary_search_by(|p| p.total_cmp(&v)) {
                        counts[y[i]][j][pos] += 1.0;
                    }
                }
            }
            Likelihood::CategoricalLaplace { alpha, values, counts }
        }
    };

    Ok((
        NaiveBayes {
            class_counts,
            priors,
            likelihood,
        },
        warnings,
    ))
}

impl NaiveBayes {
    /// `log P(C_k) + Σ log P(x_j | C_k)`; `-∞` for classes absent from
    /// training.
    pub fn log_joint(&self, row: &[f64]) -> Vec<f64> {
        (0..self.priors.len())
            .map(|k| {
                if self.class_counts[k] == 0 {
                    return f64::NEG_INFINITY;
                }
                self.priors[k].ln() + self.log_likelihood(k, row)
            })
            .collect()
    }

    fn log_likelihood(&self, k: usize, row: &[f64]) -> f64 {
        match &self.likelihood {
            Likelihood::Gaussian { means, variances } => row
                .iter()
                .zip(&means[k])
                .zip(&variances[k])
                .map(|((&x, &m), &v)| {
                    let diff = x - m;
                    -0.5 * (2.0 * std::f64::consts::PI * v).ln() - diff * diff / (2.0 * v)
                })
                .sum(),
            Likelihood::CategoricalLaplace { alpha, values, counts } => {
                let nk = self.class_counts[k] as f64;
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let n_kv = values[j]
                            .binary_search_by(|p| p.total_cmp(&x))
                            .map_or(0.0, |pos| counts[k][j][pos]);
                        let v = values[j].len() as f64;
                        ((n_kv + alpha) / (nk + alpha * v)).ln()
                    })
                    .sum()
            }
        }
    }
}

/// Posterior class probabilities for one row, normalized with
/// log-sum-exp over the classes seen in training.
pub fn nb_posterior(model: &NaiveBayes, row: &[f64]) -> Vec<f64> {
    let lj = model.log_joint(row);
    let max = lj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        // every present class underflowed; fall back to the priors
        return model.priors.clone();
    }
    let total: f64 = lj.iter().map(|&v| (v - max).exp()).sum();
    lj.iter().map(|&v| (v - max).exp() / total).collect()
}
