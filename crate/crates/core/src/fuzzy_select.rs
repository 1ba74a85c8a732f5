//! Triangular-membership feature ranking.
//!
//! Every cell of a normalized dataset is passed through a triangular
//! membership function `µ(x; a, b, c)` and the memberships are accumulated
//! per feature column:
//!
//! ```text
//! I[i] = Σ_j µ(x[j][i]; a, b, c)
//! ```
//!
//! Features are ranked by descending `I`, ties going to the smaller column
//! index, and fixed-length prefixes of the ranking become named feature
//! vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Feet `a`, `c` and peak `b` of a membership triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for TriangularParams {
    /// The symmetric triangle over the unit interval.
    fn default() -> Self {
        TriangularParams {
            a: 0.0,
            b: 0.5,
            c: 1.0,
        }
    }
}

impl TriangularParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = TriangularParams { a, b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let TriangularParams { a, b, c } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a > b || b > c {
            return Err(Error::Config(format!(
                "triangle needs finite a <= b <= c, got ({a}, {b}, {c})"
            )));
        }
        Ok(())
    }

    /// Parses `"a,b,c"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("triangle `{text}`: {e}")))?;
        match parts[..] {
            [a, b, c] => Self::new(a, b, c),
            _ => Err(Error::Config(format!("triangle `{text}` needs three values"))),
        }
    }
}

/// Triangular membership degree of `x`.
///
/// Rises as `(x - a) / (b - a)` on `[a, b]`, falls as `(c - x) / (c - b)` on
/// `[b, c]` and is 0 elsewhere. A shoulder of zero width (`a == b` or
/// `b == c`) is a step: the degree is 1 at `b` and 0 just outside it.
pub fn triangular_membership(x: f64, p: &TriangularParams) -> f64 {
    let TriangularParams { a, b, c } = *p;
    if x.is_nan() || x < a || x > c {
        0.0
    } else if x == b {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (c - x) / (c - b)
    }
}

/// How per-sample memberships are turned into feature scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accumulation {
    /// `I[i] = Σ_j µ(x[j][i])`, one score per column.
    #[default]
    PerFeature,
    /// The loop exactly as commonly printed: every `I[i]` receives the same
    /// sum over all columns, so all features tie. Kept for auditing only.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub feature_names: Vec<String>,
    pub scores: Vec<f64>,
    /// Feature indices by descending score, ties by ascending index.
    pub order: Vec<usize>,
    /// Weight of the fuzzy scores when fused with tree importances; 1 means
    /// fuzzy scores only.
    pub et_weight: f64,
}

impl FeatureRanking {
    pub fn from_scores(feature_names: Vec<String>, scores: Vec<f64>, et_weight: f64) -> Self {
        let order = rank_descending(&scores);
        FeatureRanking {
            feature_names,
            scores,
            order,
            et_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn top(&self) -> Option<usize> {
        self.order.first().copied()
    }
}

/// Indices sorted by descending score; equal scores keep ascending index.
pub fn rank_descending(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable sort keeps index order among ties
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    order
}

/// Membership sums per column of `x`. Each column is summed in row order, so
/// the result does not depend on how columns are spread over threads.
pub fn membership_scores(x: &Matrix, p: &TriangularParams, rule: Accumulation) -> Vec<f64> {
    let per_column: Vec<f64> = (0..x.cols())
        .into_par_iter()
        .map(|j| {
            (0..x.rows())
                .map(|i| triangular_membership(x.get(i, j), p))
                .sum()
        })
        .collect();
    match rule {
        Accumulation::PerFeature => per_column,
        Accumulation::Literal => {
            let total: f64 = per_column.iter().sum();
            vec![total; per_column.len()]
        }
    }
}

/// Scores and ranks the features of a normalized dataset.
pub fn fuzzy_importance(ds: &LabeledDataset, p: &TriangularParams) -> Result<FeatureRanking> {
    fuzzy_importance_with(ds, p, Accumulation::PerFeature)
}

pub fn fuzzy_importance_with(
    ds: &LabeledDataset,
    p: &TriangularParams,
    rule: Accumulation,
) -> Result<FeatureRanking> {
    p.validate()?;
    if ds.n_rows() == 0 {
        return Err(Error::Data("fuzzy importance needs at least one row".into()));
    }
    let x = ds.to_matrix()?;
    let scores = membership_scores(&x, p, rule);
    Ok(FeatureRanking::from_scores(ds.feature_names(), scores, 1.0))
}

fn normalize_by_max(v: &[f64]) -> Vec<f64> {
    let max = v.iter().copied().fold(0.0_f64, f64::max);
    if max > 0.0 {
        v.iter().map(|x| x / max).collect()
    } else {
        vec![0.0; v.len()]
    }
}

/// Blends fuzzy scores with tree-ensemble importances:
/// `ω · I / max(I) + (1 − ω) · E / max(E)`, then re-ranks.
pub fn fuse_with_et_importance(
    fr: &FeatureRanking,
    et_scores: &[f64],
    weight: f64,
) -> Result<FeatureRanking> {
    if et_scores.len() != fr.scores.len() {
        return Err(Error::Data(format!(
            "{} fuzzy scores but {} tree importances",
            fr.scores.len(),
            et_scores.len()
        )));
    }
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::Config(format!("fusion weight {weight} outside [0, 1]")));
    }
    if et_scores.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::Data("tree importances must be finite and >= 0".into()));
    }
    let fz = normalize_by_max(&fr.scores);
    let et = normalize_by_max(et_scores);
    let fused = fz
        .iter()
        .zip(&et)
        .map(|(f, e)| weight * f + (1.0 - weight) * e)
        .collect();
    Ok(FeatureRanking::from_scores(fr.feature_names.clone(), fused, weight))
}

/// A named, ordered subset of feature columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVectorSpec {
    pub name: String,
    pub indices: Vec<usize>,
    pub features: Vec<String>,
}

impl FeatureVectorSpec {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Vector `k` is the first `lengths[k]` entries of the ranking.
pub fn select_vectors(
    fr: &FeatureRanking,
    lengths: &[usize],
    names: &[String],
) -> Result<Vec<FeatureVectorSpec>> {
    if lengths.len() != names.len() {
        return Err(Error::Config(format!(
            "{} vector lengths but {} names",
            lengths.len(),
            names.len()
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Config(format!("duplicate vector name `{n}`")));
        }
    }
    lengths
        .iter()
        .zip(names)
        .map(|(&len, name)| {
            if len == 0 || len > fr.order.len() {
                return Err(Error::Config(format!(
                    "vector `{name}` length {len} not in 1..={}",
                    fr.order.len()
                )));
            }
            let indices = fr.order[..len].to_vec();
            let features = indices.iter().map(|&i| fr.feature_names[i].clone()).collect();
            Ok(FeatureVectorSpec {
                name: name.clone(),
                indices,
                features,
            })
        })
        .collect()
}

/// Default vector lengths per dataset and task, matching the published
/// selection table.
pub mod presets {
    use serde::Deserialize;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct VectorPreset {
        pub lengths: &'static [usize],
        pub names: &'static [&'static str],
    }

    impl VectorPreset {
        pub fn names(&self) -> Vec<String> {
            self.names.iter().map(|s| s.to_string()).collect()
        }
    }

    const V: &[&str] = &["v1", "v2", "v3", "v4"];
    const G: &[&str] = &["g1", "g2", "g3", "g4"];

    pub const NSL_KDD_BINARY: VectorPreset = VectorPreset {
        lengths: &[11, 9, 9, 10],
        names: V,
    };
    pub const NSL_KDD_MULTICLASS: VectorPreset = VectorPreset {
        lengths: &[14, 19, 20, 10],
        names: G,
    };
    pub const UGRANSOME_BINARY: VectorPreset = VectorPreset {
        lengths: &[11, 9, 20, 14],
        names: V,
    };
    pub const UGRANSOME_MULTICLASS: VectorPreset = VectorPreset {
        lengths: &[13, 9, 20, 14],
        names: G,
    };

    /// Looks up a preset by schema name (`nsl-kdd`, `ugransome`) and task.
    pub fn for_dataset(dataset: &str, multiclass: bool) -> Option<VectorPreset> {
        match (dataset, multiclass) {
            ("nsl-kdd", false) => Some(NSL_KDD_BINARY),
            ("nsl-kdd", true) => Some(NSL_KDD_MULTICLASS),
            ("ugransome", false) => Some(UGRANSOME_BINARY),
            ("ugransome", true) => Some(UGRANSOME_MULTICLASS),
            _ => None,
        }
    }

    /// One published vector: its length and the feature names printed for
    /// it. The printed lists are partial, so they serve for comparison only.
    #[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
    pub struct PublishedVector {
        pub dataset: String,
        pub name: String,
        pub length: usize,
        pub listed_features: Vec<String>,
    }

    pub const PUBLISHED_JSON: &str = include_str!("../data/reference/published_vectors.json");

    pub fn published_vectors() -> Vec<PublishedVector> {
        serde_json::from_str(PUBLISHED_JSON).expect("bundled reference is valid")
    }
}
