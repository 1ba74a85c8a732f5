//! Min-max scaling and ordinal encoding, fitted on the training partition.
//!
//! Numeric cells become `(v - min) / (max - min)`. A column whose training
//! minimum equals its maximum is degenerate and maps to 0. Cells outside the
//! training range (possible only on other partitions) are clamped to `[0, 1]`
//! and counted.
//!
//! Categorical cells are replaced by the index of their category, categories
//! being ordered by first appearance in the training data. An unseen category
//! maps to the reserved index `k` (the number of training categories). The
//! indices are then scaled like a numeric column whose range is `[0, k - 1]`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::dataset::{ColumnData, ColumnKind, FeatureColumn, LabeledDataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnRange {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

impl ColumnRange {
    pub fn is_degenerate(&self) -> bool {
        self.min == self.max
    }

    /// Scaled value and whether it had to be clamped.
    pub fn scale(&self, v: f64) -> (f64, bool) {
        if self.is_degenerate() {
            return (0.0, v != self.min);
        }
        let s = (v - self.min) / (self.max - self.min);
        if s < 0.0 {
            (0.0, true)
        } else if s > 1.0 {
            (1.0, true)
        } else {
            (s, false)
        }
    }
}

/// Per-numeric-column extrema observed on the fitting partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerState {
    pub columns: Vec<ColumnRange>,
}

impl ScalerState {
    pub fn range(&self, name: &str) -> Option<&ColumnRange> {
        self.columns.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryColumn {
    pub name: String,
    /// Categories in first-appearance order; the position is the ordinal.
    pub categories: Vec<String>,
}

impl CategoryColumn {
    /// Ordinal of `value`, or `categories.len()` when unseen.
    pub fn ordinal(&self, value: &str) -> usize {
        self.categories
            .iter()
            .position(|c| c == value)
            .unwrap_or(self.categories.len())
    }

    fn range(&self) -> ColumnRange {
        ColumnRange {
            name: self.name.clone(),
            min: 0.0,
            max: self.categories.len().saturating_sub(1) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalEncoderState {
    pub columns: Vec<CategoryColumn>,
}

impl CategoricalEncoderState {
    pub fn column(&self, name: &str) -> Option<&CategoryColumn> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Clamp and unseen-category counts per column for one transform call.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub rows: usize,
    pub clamped: BTreeMap<String, usize>,
    pub unseen: BTreeMap<String, usize>,
}

impl TransformReport {
    pub fn total_clamped(&self) -> usize {
        self.clamped.values().sum()
    }

    pub fn total_unseen(&self) -> usize {
        self.unseen.values().sum()
    }

    fn merge(&mut self, other: TransformReport) {
        for (k, v) in other.clamped {
            *self.clamped.entry(k).or_default() += v;
        }
        for (k, v) in other.unseen {
            *self.unseen.entry(k).or_default() += v;
        }
    }
}

pub fn fit_scaler(train: &LabeledDataset) -> Result<ScalerState> {
    if train.n_rows() == 0 {
        return Err(Error::Data("cannot fit a scaler on an empty dataset".into()));
    }
    let columns = train
        .features()
        .iter()
        .filter_map(|f| match &f.data {
            ColumnData::Numeric(v) => {
                let (min, max) = v
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                        (lo.min(x), hi.max(x))
                    });
                Some(ColumnRange {
                    name: f.name.clone(),
                    min,
                    max,
                })
            }
            ColumnData::Categorical(_) => None,
        })
        .collect();
    Ok(ScalerState { columns })
}

/// Scales every numeric column named in `state`; other columns pass through.
pub fn transform(state: &ScalerState, ds: &LabeledDataset) -> Result<(LabeledDataset, TransformReport)> {
    let mut report = TransformReport {
        rows: ds.n_rows(),
        ..Default::default()
    };
    for r in &state.columns {
        match ds.features().iter().find(|f| f.name == r.name) {
            Some(f) if f.data.kind() == ColumnKind::Numeric => {}
            Some(_) => {
                return Err(Error::SchemaMismatch(format!(
                    "column `{}` is not numeric",
                    r.name
                )))
            }
            None => {
                return Err(Error::SchemaMismatch(format!(
                    "column `{}` missing from dataset",
                    r.name
                )))
            }
        }
    }
    let features = ds
        .features()
        .iter()
        .map(|f| match (&f.data, state.range(&f.name)) {
            (ColumnData::Numeric(v), Some(r)) => {
                let mut clamped = 0;
                let scaled = v
                    .iter()
                    .map(|&x| {
                        let (s, c) = r.scale(x);
                        clamped += c as usize;
                        s
                    })
                    .collect();
                if clamped > 0 {
                    report.clamped.insert(f.name.clone(), clamped);
                }
                FeatureColumn {
                    name: f.name.clone(),
                    data: ColumnData::Numeric(scaled),
                }
            }
            _ => f.clone(),
        })
        .collect();
    let out = ds.with_features(features, ds.schema().clone())?;
    Ok((out, report))
}

pub fn fit_encoder(train: &LabeledDataset) -> CategoricalEncoderState {
    let columns = train
        .features()
        .iter()
        .filter_map(|f| match &f.data {
            ColumnData::Categorical(v) => {
                let mut seen: HashMap<&str, ()> = HashMap::new();
                let mut categories = Vec::new();
                for s in v {
                    if seen.insert(s.as_str(), ()).is_none() {
                        categories.push(s.clone());
                    }
                }
                Some(CategoryColumn {
                    name: f.name.clone(),
                    categories,
                })
            }
            ColumnData::Numeric(_) => None,
        })
        .collect();
    CategoricalEncoderState { columns }
}

/// Replaces categorical columns named in `state` by their scaled ordinals.
pub fn encode_categorical(
    state: &CategoricalEncoderState,
    ds: &LabeledDataset,
) -> Result<(LabeledDataset, TransformReport)> {
    let mut report = TransformReport {
        rows: ds.n_rows(),
        ..Default::default()
    };
    let mut features = Vec::with_capacity(ds.n_features());
    for f in ds.features() {
        let col = match (&f.data, state.column(&f.name)) {
            (ColumnData::Categorical(v), Some(enc)) => {
                let index: HashMap<&str, usize> = enc
                    .categories
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.as_str(), i))
                    .collect();
                let range = enc.range();
                let (mut unseen, mut clamped) = (0, 0);
                let scaled = v
                    .iter()
                    .map(|s| {
                        let ord = index.get(s.as_str()).copied().unwrap_or_else(|| {
                            unseen += 1;
                            enc.categories.len()
                        });
                        let (x, c) = range.scale(ord as f64);
                        clamped += c as usize;
                        x
                    })
                    .collect();
                if unseen > 0 {
                    report.unseen.insert(f.name.clone(), unseen);
                }
                if clamped > 0 {
                    report.clamped.insert(f.name.clone(), clamped);
                }
                FeatureColumn {
                    name: f.name.clone(),
                    data: ColumnData::Numeric(scaled),
                }
            }
            (ColumnData::Numeric(_), Some(_)) => {
                return Err(Error::SchemaMismatch(format!(
                    "column `{}` is already numeric",
                    f.name
                )))
            }
            _ => f.clone(),
        };
        features.push(col);
    }
    for enc in &state.columns {
        if ds.feature_index(&enc.name).is_none() {
            return Err(Error::SchemaMismatch(format!(
                "column `{}` missing from dataset",
                enc.name
            )));
        }
    }
    let schema = if features.iter().all(|f| f.data.kind() == ColumnKind::Numeric) {
        ds.schema().all_numeric()
    } else {
        ds.schema().clone()
    };
    let out = ds.with_features(features, schema)?;
    Ok((out, report))
}

/// Scaler and encoder fitted together; turns a raw dataset into an
/// all-numeric one in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    pub scaler: ScalerState,
    pub encoder: CategoricalEncoderState,
}

impl Preprocessor {
    pub fn fit(train: &LabeledDataset) -> Result<Self> {
        Ok(Preprocessor {
            scaler: fit_scaler(train)?,
            encoder: fit_encoder(train),
        })
    }

    pub fn apply(&self, ds: &LabeledDataset) -> Result<(LabeledDataset, TransformReport)> {
        let (scaled, mut report) = transform(&self.scaler, ds)?;
        let (encoded, enc_report) = encode_categorical(&self.encoder, &scaled)?;
        report.merge(enc_report);
        Ok((encoded, report))
    }
}
