//! Schema-driven CSV ingestion, label encoding and seeded partitioning.
//!
//! A [`DatasetSchema`] is external configuration: it names the columns, says
//! which are numeric and which categorical, picks the label column and maps
//! label strings to small class ids. Schema files are TOML documents with the
//! keys `name`, `columns`, `kinds`, `label_column`, `label_encoding` and the
//! optional `label_aliases` / `ignore_columns`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{component_rng, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDef {
    pub name: String,
    pub kind: ColumnKind,
}

/// On-disk layout of a schema document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaFile {
    name: String,
    columns: Vec<String>,
    kinds: Vec<ColumnKind>,
    label_column: String,
    label_encoding: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    label_aliases: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    ignore_columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemaFile", into = "SchemaFile")]
pub struct DatasetSchema {
    pub name: String,
    /// All columns including the label column, in canonical order.
    pub columns: Vec<ColumnDef>,
    pub label_column: String,
    /// Class name to class id; ids are contiguous from 0.
    pub label_encoding: BTreeMap<String, u32>,
    /// Raw label spellings rewritten to a class name before encoding, e.g.
    /// `neptune -> dos` for per-attack NSL-KDD files.
    pub label_aliases: BTreeMap<String, String>,
    /// File columns that are read past and dropped.
    pub ignore_columns: Vec<String>,
}

impl TryFrom<SchemaFile> for DatasetSchema {
    type Error = Error;

    fn try_from(f: SchemaFile) -> Result<Self> {
        if f.columns.len() != f.kinds.len() {
            return Err(Error::Config(format!(
                "schema `{}`: {} columns but {} kinds",
                f.name,
                f.columns.len(),
                f.kinds.len()
            )));
        }
        let columns = f
            .columns
            .into_iter()
            .zip(f.kinds)
            .map(|(name, kind)| ColumnDef { name, kind })
            .collect();
        let schema = DatasetSchema {
            name: f.name,
            columns,
            label_column: f.label_column,
            label_encoding: f.label_encoding,
            label_aliases: f.label_aliases,
            ignore_columns: f.ignore_columns,
        };
        schema.validate()?;
        Ok(schema)
    }
}

impl From<DatasetSchema> for SchemaFile {
    fn from(s: DatasetSchema) -> Self {
        SchemaFile {
            name: s.name,
            kinds: s.columns.iter().map(|c| c.kind).collect(),
            columns: s.columns.into_iter().map(|c| c.name).collect(),
            label_column: s.label_column,
            label_encoding: s.label_encoding,
            label_aliases: s.label_aliases,
            ignore_columns: s.ignore_columns,
        }
    }
}

impl DatasetSchema {
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in &self.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(Error::Config(format!(
                    "schema `{}`: duplicate column `{}`",
                    self.name, c.name
                )));
            }
        }
        if !seen.contains(self.label_column.as_str()) {
            return Err(Error::Config(format!(
                "schema `{}`: label column `{}` is not among the columns",
                self.name, self.label_column
            )));
        }
        for ig in &self.ignore_columns {
            if seen.contains(ig.as_str()) {
                return Err(Error::Config(format!(
                    "schema `{}`: `{ig}` is both a column and ignored",
                    self.name
                )));
            }
        }
        if self.label_encoding.is_empty() {
            return Err(Error::Config(format!(
                "schema `{}`: empty label encoding",
                self.name
            )));
        }
        let ids: BTreeSet<u32> = self.label_encoding.values().copied().collect();
        if ids.len() != self.label_encoding.len() {
            return Err(Error::Config(format!(
                "schema `{}`: label encoding is not injective",
                self.name
            )));
        }
        let k = ids.len() as u32;
        if ids.iter().copied().ne(0..k) {
            return Err(Error::Config(format!(
                "schema `{}`: class ids must be contiguous from 0",
                self.name
            )));
        }
        for (raw, target) in &self.label_aliases {
            if !self.label_encoding.contains_key(target) {
                return Err(Error::Config(format!(
                    "schema `{}`: alias `{raw}` targets unknown class `{target}`",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("schema: {e}")))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            e => e,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("schema serializes")
    }

    pub fn n_classes(&self) -> usize {
        self.label_encoding.len()
    }

    /// Feature columns (label removed), in canonical order.
    pub fn feature_columns(&self) -> impl Iterator<Item = &ColumnDef> {
        self.columns.iter().filter(|c| c.name != self.label_column)
    }

    pub fn encode_label(&self, raw: &str) -> Option<u32> {
        let name = self.label_aliases.get(raw).map_or(raw, String::as_str);
        self.label_encoding.get(name).copied()
    }

    pub fn class_name(&self, id: u32) -> Option<&str> {
        self.label_encoding
            .iter()
            .find(|(_, &v)| v == id)
            .map(|(k, _)| k.as_str())
    }

    /// Class names ordered by id.
    pub fn class_names(&self) -> Vec<String> {
        let mut names: Vec<(u32, &String)> =
            self.label_encoding.iter().map(|(k, &v)| (v, k)).collect();
        names.sort();
        names.into_iter().map(|(_, k)| k.clone()).collect()
    }

    /// Same schema with every feature column marked numeric; describes the
    /// output of preprocessing.
    pub fn all_numeric(&self) -> DatasetSchema {
        let mut s = self.clone();
        for c in &mut s.columns {
            if c.name != s.label_column {
                c.kind = ColumnKind::Numeric;
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            ColumnData::Numeric(_) => ColumnKind::Numeric,
            ColumnData::Categorical(_) => ColumnKind::Categorical,
        }
    }

    fn take(&self, idx: &[usize]) -> ColumnData {
        match self {
            ColumnData::Numeric(v) => ColumnData::Numeric(idx.iter().map(|&i| v[i]).collect()),
            ColumnData::Categorical(v) => {
                ColumnData::Categorical(idx.iter().map(|&i| v[i].clone()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    pub name: String,
    pub data: ColumnData,
}

/// Column-typed feature table with encoded class labels.
///
/// Immutable once built; every operation that changes it returns a new value.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    schema: DatasetSchema,
    features: Vec<FeatureColumn>,
    labels: Vec<u32>,
}

impl LabeledDataset {
    pub fn new(schema: DatasetSchema, features: Vec<FeatureColumn>, labels: Vec<u32>) -> Result<Self> {
        let k = schema.n_classes() as u32;
        if let Some(bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::Data(format!("label {bad} outside {k} classes")));
        }
        for f in &features {
            if f.data.len() != labels.len() {
                return Err(Error::Data(format!(
                    "column `{}` has {} rows, labels have {}",
                    f.name,
                    f.data.len(),
                    labels.len()
                )));
            }
            if let ColumnData::Numeric(v) = &f.data {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Data(format!(
                        "column `{}` holds a non-finite value",
                        f.name
                    )));
                }
            }
        }
        Ok(LabeledDataset {
            schema,
            features,
            labels,
        })
    }

    /// All-numeric dataset built from a matrix; column names are `f0, f1, ...`
    /// and classes are named by their id.
    pub fn from_matrix(name: &str, x: &Matrix, labels: Vec<u32>, n_classes: usize) -> Result<Self> {
        let mut columns: Vec<ColumnDef> = (0..x.cols())
            .map(|j| ColumnDef {
                name: format!("f{j}"),
                kind: ColumnKind::Numeric,
            })
            .collect();
        columns.push(ColumnDef {
            name: "label".into(),
            kind: ColumnKind::Categorical,
        });
        let schema = DatasetSchema {
            name: name.into(),
            columns,
            label_column: "label".into(),
            label_encoding: (0..n_classes as u32).map(|c| (c.to_string(), c)).collect(),
            label_aliases: BTreeMap::new(),
            ignore_columns: Vec::new(),
        };
        schema.validate()?;
        let features = (0..x.cols())
            .map(|j| FeatureColumn {
                name: format!("f{j}"),
                data: ColumnData::Numeric(x.column(j)),
            })
            .collect();
        LabeledDataset::new(schema, features, labels)
    }

    pub fn schema(&self) -> &DatasetSchema {
        &self.schema
    }

    pub fn features(&self) -> &[FeatureColumn] {
        &self.features
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn n_classes(&self) -> usize {
        self.schema.n_classes()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Rows `idx` in the given order.
    pub fn subset(&self, idx: &[usize]) -> LabeledDataset {
        LabeledDataset {
            schema: self.schema.clone(),
            features: self
                .features
                .iter()
                .map(|f| FeatureColumn {
                    name: f.name.clone(),
                    data: f.data.take(idx),
                })
                .collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Keeps only the feature columns at `indices`, in that order.
    pub fn select_features(&self, indices: &[usize]) -> Result<LabeledDataset> {
        let mut features = Vec::with_capacity(indices.len());
        let mut columns = Vec::with_capacity(indices.len() + 1);
        for &i in indices {
            let f = self.features.get(i).ok_or_else(|| {
                Error::SchemaMismatch(format!("feature index {i} out of range for {} features", self.features.len()))
            })?;
            let def = self
                .schema
                .columns
                .iter()
                .find(|c| c.name == f.name)
                .expect("feature columns are described by the schema");
            columns.push(def.clone());
            features.push(f.clone());
        }
        if let Some(label) = self.schema.columns.iter().find(|c| c.name == self.schema.label_column) {
            columns.push(label.clone());
        }
        let mut schema = self.schema.clone();
        schema.columns = columns;
        schema.ignore_columns.clear();
        schema.validate()?;
        LabeledDataset::new(schema, features, self.labels.clone())
    }

    /// Keeps only the named feature columns, in that order.
    pub fn select_named(&self, names: &[String]) -> Result<LabeledDataset> {
        let idx = names
            .iter()
            .map(|n| {
                self.feature_index(n)
                    .ok_or_else(|| Error::SchemaMismatch(format!("data has no feature column `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.select_features(&idx)
    }

    /// Replaces the feature columns, keeping labels and schema name.
    pub(crate) fn with_features(&self, features: Vec<FeatureColumn>, schema: DatasetSchema) -> Result<Self> {
        LabeledDataset::new(schema, features, self.labels.clone())
    }

    /// Relabels rows with a new class set.
    pub fn with_labels(&self, labels: Vec<u32>, label_encoding: BTreeMap<String, u32>) -> Result<Self> {
        let mut schema = self.schema.clone();
        schema.label_encoding = label_encoding;
        schema.label_aliases.clear();
        schema.validate()?;
        LabeledDataset::new(schema, self.features.clone(), labels)
    }

    /// Dense matrix of the feature columns; fails if any categorical column
    /// remains unencoded.
    pub fn to_matrix(&self) -> Result<Matrix> {
        let mut cols = Vec::with_capacity(self.features.len());
        for f in &self.features {
            match &f.data {
                ColumnData::Numeric(v) => cols.push(v.clone()),
                ColumnData::Categorical(_) => {
                    return Err(Error::Data(format!(
                        "column `{}` is categorical; encode it first",
                        f.name
                    )))
                }
            }
        }
        Ok(Matrix::from_columns(&cols, self.n_rows()))
    }

    pub fn labels_usize(&self) -> Vec<usize> {
        self.labels.iter().map(|&l| l as usize).collect()
    }

    /// Writes the dataset as CSV with a header: features then the label column
    /// (decoded class names).
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Data(format!("{}: {other:?}", path.display())),
        })?;
        let mut header = self.feature_names();
        header.push(self.schema.label_column.clone());
        w.write_record(&header)?;
        let names = self.schema.class_names();
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        for i in 0..self.n_rows() {
            record.clear();
            for f in &self.features {
                record.push(match &f.data {
                    ColumnData::Numeric(v) => v[i].to_string(),
                    ColumnData::Categorical(v) => v[i].clone(),
                });
            }
            record.push(names[self.labels[i] as usize].clone());
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

/// What the loader observed beyond the data itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rows: usize,
    /// True when the file header lists the schema columns in another order.
    pub header_reordered: bool,
    pub ignored_columns: Vec<String>,
}

pub fn load_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<LabeledDataset> {
    load_csv_with_report(path, schema).map(|(ds, _)| ds)
}

pub fn load_csv_with_report(
    path: impl AsRef<Path>,
    schema: &DatasetSchema,
) -> Result<(LabeledDataset, LoadReport)> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, schema)
}

/// Parses comma-delimited text with a header row against `schema`.
pub fn read_csv<R: Read>(reader: R, schema: &DatasetSchema) -> Result<(LabeledDataset, LoadReport)> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();

    let mut position: HashMap<&str, usize> = HashMap::new();
    for (i, h) in header.iter().enumerate() {
        if position.insert(h.as_str(), i).is_some() {
            return Err(Error::SchemaMismatch(format!("duplicate header column `{h}`")));
        }
    }
    let missing: Vec<&str> = schema
        .columns
        .iter()
        .map(|c| c.name.as_str())
        .filter(|n| !position.contains_key(n))
        .collect();
    if !missing.is_empty() {
        return Err(Error::SchemaMismatch(format!(
            "missing column(s): {}",
            missing.join(", ")
        )));
    }
    let known: BTreeSet<&str> = schema
        .columns
        .iter()
        .map(|c| c.name.as_str())
        .chain(schema.ignore_columns.iter().map(String::as_str))
        .collect();
    let extra: Vec<&str> = header
        .iter()
        .map(String::as_str)
        .filter(|h| !known.contains(h))
        .collect();
    if !extra.is_empty() {
        return Err(Error::SchemaMismatch(format!(
            "unexpected column(s): {}",
            extra.join(", ")
        )));
    }
    let in_file_order: Vec<&str> = header
        .iter()
        .map(String::as_str)
        .filter(|h| schema.columns.iter().any(|c| c.name == *h))
        .collect();
    let header_reordered = in_file_order
        .iter()
        .copied()
        .ne(schema.columns.iter().map(|c| c.name.as_str()));

    let feature_defs: Vec<&ColumnDef> = schema.feature_columns().collect();
    let feature_pos: Vec<usize> = feature_defs.iter().map(|c| position[c.name.as_str()]).collect();
    let label_pos = position[schema.label_column.as_str()];

    let mut data: Vec<ColumnData> = feature_defs
        .iter()
        .map(|c| match c.kind {
            ColumnKind::Numeric => ColumnData::Numeric(Vec::new()),
            ColumnKind::Categorical => ColumnData::Categorical(Vec::new()),
        })
        .collect();
    let mut labels = Vec::new();

    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        // 1-based data row numbers, header excluded
        let row = r + 1;
        if rec.len() != header.len() {
            return Err(Error::SchemaMismatch(format!(
                "row {row} has {} fields, header has {}",
                rec.len(),
                header.len()
            )));
        }
        for ((def, &p), col) in feature_defs.iter().zip(&feature_pos).zip(data.iter_mut()) {
            let cell = &rec[p];
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row,
                    column: def.name.clone(),
                });
            }
            match col {
                ColumnData::Numeric(v) => match cell.parse::<f64>() {
                    Ok(x) if x.is_finite() => v.push(x),
                    _ => {
                        return Err(Error::Parse {
                            row,
                            column: def.name.clone(),
                            value: cell.to_owned(),
                        })
                    }
                },
                ColumnData::Categorical(v) => v.push(cell.to_owned()),
            }
        }
        let raw = &rec[label_pos];
        if raw.is_empty() {
            return Err(Error::MissingValue {
                row,
                column: schema.label_column.clone(),
            });
        }
        match schema.encode_label(raw) {
            Some(id) => labels.push(id),
            None => {
                return Err(Error::UnknownLabel {
                    row,
                    label: raw.to_owned(),
                })
            }
        }
    }

    let features = feature_defs
        .iter()
        .zip(data)
        .map(|(def, data)| FeatureColumn {
            name: def.name.clone(),
            data,
        })
        .collect();
    let ignored_columns = header
        .iter()
        .filter(|h| schema.ignore_columns.contains(h))
        .cloned()
        .collect();
    let rows = labels.len();
    let ds = LabeledDataset::new(schema.clone(), features, labels)?;
    Ok((
        ds,
        LoadReport {
            rows,
            header_reordered,
            ignored_columns,
        },
    ))
}

/// Per-class counts; every encoded class appears, possibly with 0.
pub fn class_distribution(ds: &LabeledDataset) -> BTreeMap<u32, usize> {
    count_labels(ds.labels(), ds.n_classes())
}

pub fn count_labels(labels: &[u32], n_classes: usize) -> BTreeMap<u32, usize> {
    let mut out: BTreeMap<u32, usize> = (0..n_classes as u32).map(|c| (c, 0)).collect();
    for &l in labels {
        *out.entry(l).or_insert(0) += 1;
    }
    out
}

/// Partition request over a single training file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: f64,
    pub validation: f64,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub stratified: bool,
}

fn default_true() -> bool {
    true
}

impl SplitSpec {
    pub fn new(train: f64, validation: f64, seed: u64) -> Result<Self> {
        let spec = SplitSpec {
            train,
            validation,
            seed,
            stratified: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn unstratified(mut self) -> Self {
        self.stratified = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |f: f64| f.is_finite() && f > 0.0 && f < 1.0;
        if !ok(self.train) || !ok(self.validation) {
            return Err(Error::Config(format!(
                "split fractions must lie in (0, 1), got ({}, {})",
                self.train, self.validation
            )));
        }
        if (self.train + self.validation - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "split fractions must sum to 1, got {}",
                self.train + self.validation
            )));
        }
        Ok(())
    }
}

/// A class that ended up with no rows in one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitWarning {
    pub class: u32,
    pub total: usize,
    pub empty_partition: String,
}

/// Row indices of each partition, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub warnings: Vec<SplitWarning>,
}

/// Splits row indices by label. In stratified mode each class contributes
/// `round(validation * count)` rows to validation and the remainder to
/// train; class `c` is shuffled by its own RNG stream so the result depends on
/// the seed alone.
pub fn split_indices(labels: &[u32], n_classes: usize, spec: &SplitSpec) -> Result<SplitIndices> {
    spec.validate()?;
    let mut train = Vec::new();
    let mut validation = Vec::new();
    let mut warnings = Vec::new();

    if spec.stratified {
        let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for (i, &l) in labels.iter().enumerate() {
            let l = l as usize;
            if l >= n_classes {
                return Err(Error::Data(format!("label {l} outside {n_classes} classes")));
            }
            by_class[l].push(i);
        }
        for (c, mut idx) in by_class.into_iter().enumerate() {
            let total = idx.len();
            if total == 0 {
                continue;
            }
            let mut rng = component_rng(spec.seed, Domain::Split, c as u64);
            idx.shuffle(&mut rng);
            let n_val = (spec.validation * total as f64).round() as usize;
            let (val, tr) = idx.split_at(n_val);
            for (part, frac, name) in [(val, spec.validation, "validation"), (tr, spec.train, "train")] {
                if part.is_empty() {
                    if (total as f64) >= 1.0 / frac {
                        return Err(Error::Data(format!(
                            "class {c} with {total} rows left the {name} partition empty"
                        )));
                    }
                    warnings.push(SplitWarning {
                        class: c as u32,
                        total,
                        empty_partition: name.into(),
                    });
                }
            }
            validation.extend_from_slice(val);
            train.extend_from_slice(tr);
        }
    } else {
        let mut idx: Vec<usize> = (0..labels.len()).collect();
        let mut rng = component_rng(spec.seed, Domain::Split, u64::MAX);
        idx.shuffle(&mut rng);
        let n_val = (spec.validation * idx.len() as f64).round() as usize;
        validation.extend_from_slice(&idx[..n_val]);
        train.extend_from_slice(&idx[n_val..]);
    }
    train.sort_unstable();
    validation.sort_unstable();
    Ok(SplitIndices {
        train,
        validation,
        warnings,
    })
}

#[derive(Debug, Clone)]
pub struct Partition {
    pub train: LabeledDataset,
    pub validation: LabeledDataset,
    pub indices: SplitIndices,
}

pub fn stratified_split(ds: &LabeledDataset, spec: &SplitSpec) -> Result<Partition> {
    let indices = split_indices(ds.labels(), ds.n_classes(), spec)?;
    Ok(Partition {
        train: ds.subset(&indices.train),
        validation: ds.subset(&indices.validation),
        indices,
    })
}

/// Reference schemas for the two corpora, shipped with the crate.
pub mod reference {
    use super::DatasetSchema;

    pub const NSL_KDD_TOML: &str = include_str!("../data/schemas/nsl-kdd.toml");
    pub const UGRANSOME_TOML: &str = include_str!("../data/schemas/ugransome.toml");

    pub fn nsl_kdd() -> DatasetSchema {
        DatasetSchema::from_toml_str(NSL_KDD_TOML).expect("bundled schema is valid")
    }

    pub fn ugransome() -> DatasetSchema {
        DatasetSchema::from_toml_str(UGRANSOME_TOML).expect("bundled schema is valid")
    }
}
