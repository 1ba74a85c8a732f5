//! Config-driven experiment runs.
//!
//! A run loads the training and test files, splits the training file into
//! train and validation partitions (stratified on the original classes),
//! collapses labels to two classes for binary tasks, fits the preprocessor on
//! the train partition, ranks features on the transformed train partition,
//! cuts the named feature vectors from the ranking and then trains and
//! evaluates every configured model on every vector. Each `(model, vector)`
//! pair is one cell of the report.
//!
//! Everything written under the output directory is a pure function of the
//! config, apart from `timings.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{self, DatasetSchema, LabeledDataset, SplitSpec, SplitWarning};
use crate::error::{Error, Result, Stage, StageExt};
use crate::evaluate::{class_rocs_to_csv, evaluate, roc_to_csv, MetricsReport};
use crate::fuzzy_select::{
    fuse_with_et_importance, fuzzy_importance_with, presets, select_vectors, Accumulation, FeatureRanking,
    FeatureVectorSpec, TriangularParams,
};
use crate::models::{ClassifierConfig, ModelKind, ModelParams, TrainedModel};
use crate::preprocess::{Preprocessor, TransformReport};

/// Environment variable that replaces the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "FUZZIDS_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Binary,
    Multiclass,
}

/// Which original classes become the positive class of a binary task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinaryRule {
    pub positive: Vec<String>,
    /// Classes mapped to 0. When absent, every class not in `positive`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative: Option<Vec<String>>,
}

impl BinaryRule {
    /// `normal` is negative, every attack category positive.
    pub fn nsl_kdd() -> Self {
        BinaryRule {
            positive: vec!["dos".into(), "probe".into(), "r2l".into(), "u2r".into()],
            negative: Some(vec!["normal".into()]),
        }
    }

    /// Anomaly `A` is positive, signatures `S` and `SS` negative.
    pub fn ugransome() -> Self {
        BinaryRule {
            positive: vec!["A".into()],
            negative: Some(vec!["S".into(), "SS".into()]),
        }
    }

    /// Default rule for a bundled schema name.
    pub fn for_dataset(name: &str) -> Option<Self> {
        match name {
            "nsl-kdd" => Some(Self::nsl_kdd()),
            "ugransome" => Some(Self::ugransome()),
            _ => None,
        }
    }

    /// 0/1 target for each class id of `schema`; `None` for classes the
    /// rule does not cover.
    pub fn class_targets(&self, schema: &DatasetSchema) -> Result<Vec<Option<u32>>> {
        let known: BTreeSet<&str> = schema.label_encoding.keys().map(String::as_str).collect();
        let mentioned = self.positive.iter().chain(self.negative.iter().flatten());
        for name in mentioned {
            if !known.contains(name.as_str()) {
                return Err(Error::Config(format!(
                    "binary rule names class `{name}`, which schema `{}` does not define",
                    schema.name
                )));
            }
        }
        if let Some(neg) = &self.negative {
            if let Some(both) = neg.iter().find(|n| self.positive.contains(n)) {
                return Err(Error::Config(format!("class `{both}` is both positive and negative")));
            }
        }
        Ok(schema
            .class_names()
            .iter()
            .map(|name| {
                if self.positive.contains(name) {
                    Some(1)
                } else {
                    match &self.negative {
                        None => Some(0),
                        Some(neg) if neg.contains(name) => Some(0),
                        Some(_) => None,
                    }
                }
            })
            .collect())
    }
}

/// Collapses class ids to 0/1 under `rule`.
///
/// ```
/// use fuzzids::dataset::reference;
/// use fuzzids::pipeline::{binary_mapping, BinaryRule};
///
/// let nsl = reference::nsl_kdd();
/// assert_eq!(binary_mapping(&[0, 4, 3, 1], &nsl, &BinaryRule::nsl_kdd())?, vec![0, 1, 1, 1]);
/// # Ok::<(), fuzzids::Error>(())
/// ```
pub fn binary_mapping(labels: &[u32], schema: &DatasetSchema, rule: &BinaryRule) -> Result<Vec<u32>> {
    let targets = rule.class_targets(schema)?;
    labels
        .iter()
        .map(|&l| {
            targets.get(l as usize).copied().flatten().ok_or_else(|| {
                Error::Data(format!(
                    "label `{}` is not covered by the binary rule",
                    schema.class_name(l).unwrap_or("?")
                ))
            })
        })
        .collect()
}

/// Class names of a collapsed binary task.
pub const BINARY_CLASSES: [&str; 2] = ["negative", "positive"];

fn binary_dataset(ds: &LabeledDataset, rule: &BinaryRule) -> Result<LabeledDataset> {
    let labels = binary_mapping(ds.labels(), ds.schema(), rule)?;
    let encoding = BINARY_CLASSES
        .iter()
        .enumerate()
        .map(|(i, n)| (n.to_string(), i as u32))
        .collect();
    ds.with_labels(labels, encoding)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPaths {
    pub train: PathBuf,
    pub test: PathBuf,
    pub schema: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub train: f64,
    pub validation: f64,
    #[serde(default = "yes")]
    pub stratified: bool,
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

impl SplitConfig {
    /// 80/20 for NSL-KDD, 70/30 for UGRansome.
    pub fn for_dataset(name: &str) -> Option<Self> {
        let (train, validation) = match name {
            "nsl-kdd" => (0.8, 0.2),
            "ugransome" => (0.7, 0.3),
            _ => return None,
        };
        Some(SplitConfig {
            train,
            validation,
            stratified: true,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionConfig {
    #[serde(default)]
    pub params: TriangularParams,
    #[serde(default)]
    pub accumulation: Accumulation,
    /// Vector lengths; defaults to the preset of the dataset and task.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    /// Weight of the fuzzy scores against extra-trees importances; 1 turns
    /// fusion off.
    #[serde(default = "one")]
    pub et_weight: f64,
    /// Shorten vectors longer than the feature count instead of failing.
    #[serde(default = "yes")]
    pub clamp_lengths: bool,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            params: TriangularParams::default(),
            accumulation: Accumulation::PerFeature,
            lengths: None,
            names: None,
            et_weight: 1.0,
            clamp_lengths: true,
        }
    }
}

/// One experiment. Relative paths are resolved against the directory of
/// the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExperimentConfigFile")]
pub struct ExperimentConfig {
    pub seed: u64,
    pub task: Task,
    pub output_dir: PathBuf,
    pub data: DataPaths,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary: Option<BinaryRule>,
    pub selection: SelectionConfig,
    /// Classifiers to train on every vector. A model without its own seed
    /// takes the experiment seed.
    pub models: Vec<ClassifierConfig>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentConfigFile {
    seed: u64,
    task: Task,
    output_dir: PathBuf,
    data: DataPaths,
    split: Option<SplitConfig>,
    binary: Option<BinaryRule>,
    #[serde(default)]
    selection: SelectionConfig,
    #[serde(default)]
    models: Vec<toml::Table>,
}

impl TryFrom<ExperimentConfigFile> for ExperimentConfig {
    type Error = Error;

    fn try_from(f: ExperimentConfigFile) -> Result<Self> {
        let models = f
            .models
            .into_iter()
            .map(|mut t| {
                if !t.contains_key("seed") {
                    let seed = i64::try_from(f.seed)
                        .map_err(|_| Error::Config(format!("seed {} does not fit a config integer", f.seed)))?;
                    t.insert("seed".into(), toml::Value::Integer(seed));
                }
                toml::Value::Table(t)
                    .try_into::<ClassifierConfig>()
                    .map_err(|e| Error::Config(format!("model entry: {}", e.message())))
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = ExperimentConfig {
            seed: f.seed,
            task: f.task,
            output_dir: f.output_dir,
            data: f.data,
            split: f.split,
            binary: f.binary,
            selection: f.selection,
            models,
            base_dir: PathBuf::new(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    /// Reads a config file; relative paths resolve against its directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// Replaces the output directory with `$FUZZIDS_OUTPUT_DIR` when set.
    pub fn apply_env_override(&mut self) {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                self.output_dir = std::env::current_dir().unwrap_or_default().join(dir);
            }
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.split {
            SplitSpec {
                train: s.train,
                validation: s.validation,
                seed: self.seed,
                stratified: s.stratified,
            }
            .validate()?;
        }
        self.selection.params.validate()?;
        let sel = &self.selection;
        if !(0.0..=1.0).contains(&sel.et_weight) {
            return Err(Error::Config(format!("et_weight {} outside [0, 1]", sel.et_weight)));
        }
        if let (Some(l), Some(n)) = (&sel.lengths, &sel.names) {
            if l.len() != n.len() {
                return Err(Error::Config(format!("{} vector lengths but {} names", l.len(), n.len())));
            }
        }
        if let Some(names) = &sel.names {
            let unique: BTreeSet<&String> = names.iter().collect();
            if unique.len() != names.len() {
                return Err(Error::Config("vector names must be unique".into()));
            }
        }
        if let Some(l) = &sel.lengths {
            if l.contains(&0) {
                return Err(Error::Config("vector lengths must be >= 1".into()));
            }
        }
        for m in &self.models {
            m.validate()?;
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// SHA-256 of the canonical config with the output directory blanked.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = PathBuf::new();
        let json = serde_json::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Report label of model `i`: its kind, suffixed with the position when
    /// the kind occurs more than once.
    pub fn model_label(&self, i: usize) -> String {
        let kind = self.models[i].kind;
        if self.models.iter().filter(|m| m.kind == kind).count() > 1 {
            format!("{kind}-{}", i + 1)
        } else {
            kind.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub train_rows: usize,
    pub validation_rows: usize,
    pub test_rows: usize,
    pub warnings: Vec<SplitWarning>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSummary {
    pub train: TransformReport,
    pub validation: TransformReport,
    pub test: TransformReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub model: String,
    pub kind: ModelKind,
    pub vector: String,
    pub features: Vec<String>,
    /// Metrics on the validation partition; its accuracy is the VAC.
    pub validation: MetricsReport,
    /// Metrics on the test file; its accuracy is the TAC.
    pub test: MetricsReport,
    pub warnings: Vec<String>,
}

impl Cell {
    pub fn id(&self) -> String {
        format!("{}_{}", self.model, self.vector)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CellTiming {
    pub model: String,
    pub vector: String,
    pub train_ms: f64,
    pub evaluate_ms: f64,
}

/// Wall-clock time per stage, in milliseconds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: BTreeMap<String, f64>,
    pub cells: Vec<CellTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub dataset: String,
    pub task: Task,
    pub classes: Vec<String>,
    pub split: SplitSummary,
    pub transform: TransformSummary,
    pub ranking: FeatureRanking,
    pub vectors: Vec<FeatureVectorSpec>,
    pub cells: Vec<Cell>,
    pub warnings: Vec<String>,
    /// Kept out of `report.json` so reruns stay byte-identical; written to
    /// `timings.json` instead.
    #[serde(skip)]
    pub timings: Timings,
}

impl RunReport {
    pub fn cell(&self, model: &str, vector: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.model == model && c.vector == vector)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(run_dir: impl AsRef<Path>) -> Result<Self> {
        let path = run_dir.as_ref().join(REPORT_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub const REPORT_FILE: &str = "report.json";
pub const TIMINGS_FILE: &str = "timings.json";

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn load_data(cfg: &ExperimentConfig) -> Result<(DatasetSchema, LabeledDataset, LabeledDataset)> {
    let schema_path = cfg.resolve(&cfg.data.schema);
    let schema = DatasetSchema::from_path(&schema_path)?;
    for p in [&cfg.data.train, &cfg.data.test] {
        let full = cfg.resolve(p);
        if !full.is_file() {
            return Err(Error::Data(format!("{}: no such file", full.display())));
        }
    }
    let train = dataset::load_csv(cfg.resolve(&cfg.data.train), &schema)?;
    let test = dataset::load_csv(cfg.resolve(&cfg.data.test), &schema)?;
    Ok((schema, train, test))
}

/// Runs the whole experiment and writes every artifact under the output
/// directory. On failure, artifacts written so far are left in place.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let out = cfg.output_path();
    fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let mut timings = Timings::default();
    let mut warnings = Vec::new();

    write_file(&out.join("config.toml"), &cfg.to_toml_string()?)?;

    let t = Instant::now();
    let (schema, full_train, test_raw) = load_data(cfg).stage(Stage::Ingest)?;
    timings.stages.insert("ingest".into(), ms_since(t));

    let t = Instant::now();
    let split_cfg = cfg
        .split
        .or_else(|| SplitConfig::for_dataset(&schema.name))
        .ok_or_else(|| Error::Config(format!("no [split] section and no default for dataset `{}`", schema.name)))
        .stage(Stage::Split)?;
    let spec = SplitSpec {
        train: split_cfg.train,
        validation: split_cfg.validation,
        seed: cfg.seed,
        stratified: split_cfg.stratified,
    };
    let partition = dataset::stratified_split(&full_train, &spec).stage(Stage::Split)?;
    for w in &partition.indices.warnings {
        warnings.push(format!(
            "class {} has only {} rows; the {} partition got none of them",
            w.class, w.total, w.empty_partition
        ));
    }
    write_json(&out.join("split.json"), &partition.indices)?;

    let (train_raw, val_raw, test_raw) = match cfg.task {
        Task::Multiclass => (partition.train, partition.validation, test_raw),
        Task::Binary => {
            let rule = cfg
                .binary
                .clone()
                .or_else(|| BinaryRule::for_dataset(&schema.name))
                .ok_or_else(|| {
                    Error::Config(format!("binary task needs a [binary] rule for dataset `{}`", schema.name))
                })
                .stage(Stage::Split)?;
            (
                binary_dataset(&partition.train, &rule).stage(Stage::Split)?,
                binary_dataset(&partition.validation, &rule).stage(Stage::Split)?,
                binary_dataset(&test_raw, &rule).stage(Stage::Split)?,
            )
        }
    };
    timings.stages.insert("split".into(), ms_since(t));

    let t = Instant::now();
    let pre = Preprocessor::fit(&train_raw).stage(Stage::Preprocess)?;
    write_json(&out.join("preprocessor.json"), &pre)?;
    let (train, train_report) = pre.apply(&train_raw).stage(Stage::Preprocess)?;
    let (validation, val_report) = pre.apply(&val_raw).stage(Stage::Preprocess)?;
    let (test, test_report) = pre.apply(&test_raw).stage(Stage::Preprocess)?;
    timings.stages.insert("preprocess".into(), ms_since(t));

    let t = Instant::now();
    let (ranking, vectors) = select(cfg, &schema.name, &train, &mut warnings).stage(Stage::Select)?;
    write_json(
        &out.join("ranking.json"),
        &serde_json::json!({ "ranking": &ranking, "vectors": &vectors }),
    )?;
    timings.stages.insert("select".into(), ms_since(t));

    let projected: Vec<(LabeledDataset, LabeledDataset, LabeledDataset)> = vectors
        .iter()
        .map(|v| {
            Ok((
                train.select_features(&v.indices)?,
                validation.select_features(&v.indices)?,
                test.select_features(&v.indices)?,
            ))
        })
        .collect::<Result<_>>()
        .stage(Stage::Select)?;

    let t = Instant::now();
    let jobs: Vec<(usize, usize)> = (0..cfg.models.len())
        .flat_map(|m| (0..vectors.len()).map(move |v| (m, v)))
        .collect();
    let results: Vec<(Cell, CellTiming, TrainedModel)> = jobs
        .par_iter()
        .map(|&(m, v)| {
            let label = cfg.model_label(m);
            let (tr, va, te) = &projected[v];
            let t0 = Instant::now();
            let model = TrainedModel::fit(tr, &cfg.models[m]).stage(Stage::Train)?;
            let train_ms = ms_since(t0);
            let t1 = Instant::now();
            let validation = evaluate(va.labels(), &model.score(va)?).stage(Stage::Evaluate)?;
            let test = evaluate(te.labels(), &model.score(te)?).stage(Stage::Evaluate)?;
            let cell = Cell {
                model: label.clone(),
                kind: model.kind,
                vector: vectors[v].name.clone(),
                features: vectors[v].features.clone(),
                validation,
                test,
                warnings: model.warnings.clone(),
            };
            let timing = CellTiming {
                model: label,
                vector: vectors[v].name.clone(),
                train_ms,
                evaluate_ms: ms_since(t1),
            };
            Ok((cell, timing, model))
        })
        .collect::<Result<_>>()?;
    timings.stages.insert("train_evaluate".into(), ms_since(t));

    let models_dir = out.join("models");
    fs::create_dir_all(&models_dir).map_err(|e| Error::io(&models_dir, e))?;
    let mut cells = Vec::with_capacity(results.len());
    for (cell, timing, model) in results {
        model.save(models_dir.join(format!("{}.json", cell.id())))?;
        timings.cells.push(timing);
        cells.push(cell);
    }

    let classes = train.schema().class_names();
    let report = RunReport {
        provenance: Provenance {
            config_hash: cfg.hash(),
            seed: cfg.seed,
            version: crate::VERSION.to_string(),
        },
        dataset: schema.name.clone(),
        task: cfg.task,
        classes,
        split: SplitSummary {
            train_rows: train.n_rows(),
            validation_rows: validation.n_rows(),
            test_rows: test.n_rows(),
            warnings: partition.indices.warnings.clone(),
        },
        transform: TransformSummary {
            train: train_report,
            validation: val_report,
            test: test_report,
        },
        ranking,
        vectors,
        cells,
        warnings,
        timings,
    };

    let t = Instant::now();
    write_file(&out.join(REPORT_FILE), &report.to_json()?).stage(Stage::Report)?;
    emit_report(&report, &out, &ReportFormat::ALL).stage(Stage::Report)?;
    let mut timings = report.timings.clone();
    timings.stages.insert("report".into(), ms_since(t));
    write_json(&out.join(TIMINGS_FILE), &timings).stage(Stage::Report)?;
    Ok(RunReport { timings, ..report })
}

fn select(
    cfg: &ExperimentConfig,
    dataset: &str,
    train: &LabeledDataset,
    warnings: &mut Vec<String>,
) -> Result<(FeatureRanking, Vec<FeatureVectorSpec>)> {
    let sel = &cfg.selection;
    let mut ranking = fuzzy_importance_with(train, &sel.params, sel.accumulation)?;
    if sel.et_weight < 1.0 {
        let et_cfg = ClassifierConfig::defaults(ModelKind::Et).with_seed(cfg.seed);
        let et = TrainedModel::fit(train, &et_cfg)?;
        let ModelParams::Forest(forest) = &et.params else {
            unreachable!("extra-trees fit yields a forest")
        };
        ranking = fuse_with_et_importance(&ranking, &forest.importances, sel.et_weight)?;
    }

    let preset = presets::for_dataset(dataset, cfg.task == Task::Multiclass);
    let lengths = match (&sel.lengths, preset) {
        (Some(l), _) => l.clone(),
        (None, Some(p)) => p.lengths.to_vec(),
        (None, None) => {
            return Err(Error::Config(format!(
                "no vector lengths configured and no preset for dataset `{dataset}`"
            )))
        }
    };
    let names = match (&sel.names, preset) {
        (Some(n), _) => n.clone(),
        (None, Some(p)) if p.lengths.len() == lengths.len() => p.names(),
        (None, _) => (1..=lengths.len()).map(|i| format!("v{i}")).collect(),
    };
    let n_features = ranking.len();
    let lengths: Vec<usize> = lengths
        .iter()
        .zip(&names)
        .map(|(&len, name)| {
            if len > n_features && sel.clamp_lengths {
                warnings.push(format!(
                    "vector `{name}` length {len} exceeds the {n_features} available features; clamped"
                ));
                n_features
            } else {
                len
            }
        })
        .collect();
    let vectors = select_vectors(&ranking, &lengths, &names)?;
    Ok((ranking, vectors))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// `metrics.csv`: one row per cell.
    Table,
    /// `roc/<model>_<vector>.csv`: test-partition ROC points per cell.
    Roc,
    /// `confusion/<model>_<vector>.csv`: test-partition confusion matrix per
    /// cell.
    Cm,
    /// `features.csv`: each vector's features in rank order.
    Features,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 4] = [
        ReportFormat::Table,
        ReportFormat::Roc,
        ReportFormat::Cm,
        ReportFormat::Features,
    ];
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "roc" => Ok(ReportFormat::Roc),
            "cm" => Ok(ReportFormat::Cm),
            "features" => Ok(ReportFormat::Features),
            _ => Err(Error::Config(format!(
                "unknown report format `{s}` (expected table, roc, cm or features)"
            ))),
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// The metrics table: validation accuracy (VAC), then test accuracy (TAC)
/// and the test-partition precision, recall, F1, error and AUC.
pub fn metrics_table(report: &RunReport) -> String {
    let mut out = String::from("model,vector,length,vac,tac,precision,recall,f1,error,auc\n");
    for c in &report.cells {
        let t = &c.test;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.model,
            c.vector,
            c.features.len(),
            c.validation.accuracy,
            t.accuracy,
            t.precision,
            t.recall,
            t.f1,
            t.error,
            fmt_opt(t.auc)
        );
    }
    out
}

/// Each vector's features in rank order, `;`-separated.
pub fn features_table(report: &RunReport) -> String {
    let mut out = String::from("vector,length,features\n");
    for v in &report.vectors {
        let _ = writeln!(out, "{},{},{}", v.name, v.len(), v.features.join(";"));
    }
    out
}

/// Writes the requested renderings of `report` under `dir` and returns the
/// written paths.
pub fn emit_report(report: &RunReport, dir: &Path, formats: &[ReportFormat]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for &f in formats {
        match f {
            ReportFormat::Table => {
                let p = dir.join("metrics.csv");
                write_file(&p, &metrics_table(report))?;
                written.push(p);
            }
            ReportFormat::Features => {
                let p = dir.join("features.csv");
                write_file(&p, &features_table(report))?;
                written.push(p);
            }
            ReportFormat::Roc => {
                for c in &report.cells {
                    let p = dir.join("roc").join(format!("{}.csv", c.id()));
                    let text = if report.classes.len() == 2 {
                        c.test.roc.first().map_or_else(|| roc_to_csv(&[]), |r| roc_to_csv(&r.points))
                    } else {
                        class_rocs_to_csv(&c.test.roc)
                    };
                    write_file(&p, &text)?;
                    written.push(p);
                }
            }
            ReportFormat::Cm => {
                for c in &report.cells {
                    let p = dir.join("confusion").join(format!("{}.csv", c.id()));
                    write_file(&p, &c.test.confusion.to_csv(&report.classes))?;
                    written.push(p);
                }
            }
        }
    }
    Ok(written)
}
