//! Soft-margin support vector machine trained on the primal.
//!
//! The objective `½‖w‖² + C·Σ max(0, 1 − y_i(wᵀx_i + b))` is minimized by
//! full-batch subgradient steps with a backtracking step size: a step is
//! kept only if it lowers the objective, the step halves after a rejection
//! and doubles after an acceptance. The recorded objective therefore never
//! increases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

const MAX_HALVINGS: usize = 60;

/// Kernel used by the decision function. Only the linear kernel
/// `K(x, z) = xᵀz` is implemented; the decision is `wᵀx + b`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    #[default]
    Linear,
}

/// One binary machine separating `+1` from `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Objective before the first step and after every accepted step.
    pub objective: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// All training labels were equal; the machine is a constant.
    pub degenerate: bool,
}

/// Signed score `wᵀx + b`.
///
/// ```
/// use fuzzids::models::svm::{svm_decision, LinearSvm};
///
/// let m = LinearSvm {
///     weights: vec![1.0, 0.0],
///     bias: 0.0,
///     objective: vec![],
///     iterations: 0,
///     converged: true,
///     degenerate: false,
/// };
/// assert_eq!(svm_decision(&m, &[2.0, 0.0]), 2.0);
/// ```
pub fn svm_decision(model: &LinearSvm, x: &[f64]) -> f64 {
    model.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + model.bias
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SvmParams {
    pub c: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

fn objective(x: &Matrix, y: &[f64], w: &[f64], b: f64, c: f64) -> f64 {
    let reg = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let hinge: f64 = (0..x.rows())
        .map(|i| {
            let m = y[i] * (x.row(i).iter().zip(w).map(|(a, b)| a * b).sum::<f64>() + b);
            (1.0 - m).max(0.0)
        })
        .sum();
    reg + c * hinge
}

/// Trains on labels in `{-1, +1}`, visiting samples in index order.
pub(crate) fn fit_linear(x: &Matrix, y: &[f64], params: &SvmParams) -> LinearSvm {
    let d = x.cols();
    if let Some(&first) = y.first() {
        if y.iter().all(|&v| v == first) {
            return LinearSvm {
                weights: vec![0.0; d],
                bias: first,
                objective: Vec::new(),
                iterations: 0,
                converged: true,
                degenerate: true,
            };
        }
    }

    let c = params.c;
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut j = objective(x, y, &w, b, c);
    let mut trace = vec![j];
    let mut eta = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    let mut gw = vec![0.0; d];
    let mut trial = vec![0.0; d];

    while iterations < params.max_iters {
        iterations += 1;
        gw.copy_from_slice(&w);
        let mut gb = 0.0;
        for (i, &yi) in y.iter().enumerate().take(x.rows()) {
            let row = x.row(i);
            let m = yi * (row.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + b);
            if m < 1.0 {
                for (g, v) in gw.iter_mut().zip(row) {
                    *g -= c * yi * v;
                }
                gb -= c * yi;
            }
        }

        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            for k in 0..d {
                trial[k] = w[k] - eta * gw[k];
            }
            let tb = b - eta * gb;
            let tj = objective(x, y, &trial, tb, c);
            if tj < j {
                accepted = Some((tb, tj));
                break;
            }
            eta *= 0.5;
        }
        let Some((tb, tj)) = accepted else {
            // no descent along the subgradient: at (or numerically at) the minimum
            converged = true;
            break;
        };
        let improvement = j - tj;
        std::mem::swap(&mut w, &mut trial);
        b = tb;
        j = tj;
        trace.push(j);
        eta *= 2.0;
        if improvement < params.tolerance * j.max(1.0) {
            converged = true;
            break;
        }
    }

    LinearSvm {
        weights: w,
        bias: b,
        objective: trace,
        iterations,
        converged,
        degenerate: false,
    }
}

/// Binary tasks use one machine for class 1 (scores `[-m, m]`); more
/// classes use one machine per class against the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: Kernel,
    pub n_classes: usize,
    pub machines: Vec<LinearSvm>,
}

impl SvmModel {
    pub fn margins(&self, row: &[f64]) -> Vec<f64> {
        match self.n_classes {
            0 | 1 => vec![1.0; self.n_classes],
            2 => {
                let m = svm_decision(&self.machines[0], row);
                vec![-m, m]
            }
            _ => self.machines.iter().map(|m| svm_decision(m, row)).collect(),
        }
    }

    pub fn converged(&self) -> bool {
        self.machines.iter().all(|m| m.converged)
    }

    pub fn degenerate(&self) -> bool {
        self.machines.iter().any(|m| m.degenerate)
    }
}

pub(crate) fn fit_svm(x: &Matrix, y: &[usize], n_classes: usize, params: &SvmParams) -> SvmModel {
    let signs = |k: usize| -> Vec<f64> { y.iter().map(|&c| if c == k { 1.0 } else { -1.0 }).collect() };
    let machines = match n_classes {
        0 | 1 => Vec::new(),
        2 => vec![fit_linear(x, &signs(1), params)],
        _ => (0..n_classes)
            .into_par_iter()
            .map(|k| fit_linear(x, &signs(k), params))
            .collect(),
    };
    SvmModel {
        kernel: Kernel::Linear,
        n_classes,
        machines,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c: f64) -> SvmParams {
        SvmParams {
            c,
            tolerance: 1e-9,
            max_iters: 5000,
        }
    }

    #[test]
    fn symmetric_pair_is_separated_near_zero() {
        let x = Matrix::from_rows(&[vec![-1.0], vec![1.0]]).unwrap();
        let m = fit_linear(&x, &[-1.0, 1.0], &params(1000.0));
        assert!(svm_decision(&m, &[-1.0]) < 0.0);
        assert!(svm_decision(&m, &[1.0]) > 0.0);
        let boundary = -m.bias / m.weights[0];
        assert!(boundary.abs() < 0.1, "{boundary}");
    }

    #[test]
    fn objective_trace_is_monotone() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 7) as f64 / 7.0, (i % 5) as f64 / 5.0]).collect();
        let y: Vec<f64> = (0..30).map(|i| if (i % 7) + (i % 5) > 5 { 1.0 } else { -1.0 }).collect();
        let m = fit_linear(&Matrix::from_rows(&rows).unwrap(), &y, &params(1.0));
        assert!(m.objective.len() > 1);
        for w in m.objective.windows(2) {
            assert!(w[1] <= w[0] + 1e-6);
        }
    }

    #[test]
    fn identical_labels_are_degenerate() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let m = fit_svm(&x, &[1, 1], 2, &params(1.0));
        assert!(m.degenerate());
        for v in [-3.0, 0.0, 3.0] {
            assert!(m.margins(&[v])[1] > 0.0);
        }
    }

    #[test]
    fn iteration_cap_sets_flag() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 20.0]).collect();
        let y: Vec<f64> = (0..20).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let m = fit_linear(
            &Matrix::from_rows(&rows).unwrap(),
            &y,
            &SvmParams {
                c: 1.0,
                tolerance: 0.0,
                max_iters: 2,
            },
        );
        assert_eq!(m.iterations, 2);
        assert!(!m.converged);
    }
}
