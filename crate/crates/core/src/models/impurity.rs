use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Impurity {
    /// `-Σ p log2 p`, in bits.
    #[default]
    Entropy,
    /// `1 - Σ p²`.
    Gini,
}

/// Impurity of a class-probability vector. `0 · log 0` counts as 0.
pub fn impurity(kind: Impurity, proportions: &[f64]) -> Result<f64> {
    if proportions.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::Data("proportions must be finite and >= 0".into()));
    }
    let total: f64 = proportions.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Data(format!("proportions sum to {total}, not 1")));
    }
    Ok(match kind {
        Impurity::Entropy => entropy_of(proportions.iter().copied()),
        Impurity::Gini => gini_of(proportions.iter().copied()),
    })
}

fn entropy_of(ps: impl Iterator<Item = f64>) -> f64 {
    let h: f64 = ps.filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum();
    // a pure node may come out as -0.0
    h.max(0.0)
}

fn gini_of(ps: impl Iterator<Item = f64>) -> f64 {
    (1.0 - ps.map(|p| p * p).sum::<f64>()).max(0.0)
}

/// Impurity straight from (possibly weighted) class counts.
#[inline]
pub(crate) fn from_counts(kind: Impurity, counts: &[f64], total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let ps = counts.iter().map(|&c| c / total);
    match kind {
        Impurity::Entropy => entropy_of(ps),
        Impurity::Gini => gini_of(ps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn balanced_binary_is_maximal() {
        assert_eq!(impurity(Impurity::Entropy, &[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(impurity(Impurity::Gini, &[0.5, 0.5]).unwrap(), 0.5);
    }

    #[test]
    fn pure_node_is_zero() {
        assert_eq!(impurity(Impurity::Entropy, &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(impurity(Impurity::Gini, &[1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn quarter_three_quarters() {
        // -(0.25 log2 0.25 + 0.75 log2 0.75) and 1 - (0.0625 + 0.5625)
        assert_abs_diff_eq!(impurity(Impurity::Entropy, &[0.25, 0.75]).unwrap(), 0.811278, epsilon = 1e-6);
        assert_abs_diff_eq!(impurity(Impurity::Gini, &[0.25, 0.75]).unwrap(), 0.375, epsilon = 1e-15);
    }

    #[test]
    fn bounds_for_k_classes() {
        for k in 2..8 {
            let p = vec![1.0 / k as f64; k];
            let h = impurity(Impurity::Entropy, &p).unwrap();
            let g = impurity(Impurity::Gini, &p).unwrap();
            assert_abs_diff_eq!(h, (k as f64).log2(), epsilon = 1e-12);
            assert_abs_diff_eq!(g, 1.0 - 1.0 / k as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_distributions() {
        assert!(impurity(Impurity::Entropy, &[0.5, 0.6]).is_err());
        assert!(impurity(Impurity::Gini, &[1.5, -0.5]).is_err());
    }
}
