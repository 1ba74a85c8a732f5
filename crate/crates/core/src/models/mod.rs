//! Six classifiers behind one fit/score/predict contract.
//!
//! ```
//! use fuzzids::dataset::LabeledDataset;
//! use fuzzids::models::{ClassifierConfig, ModelKind, TrainedModel};
//! use fuzzids::Matrix;
//!
//! let x = Matrix::from_rows(&[vec![0.0], vec![0.1], vec![0.9], vec![1.0]])?;
//! let train = LabeledDataset::from_matrix("toy", &x, vec![0, 0, 1, 1], 2)?;
//! let model = TrainedModel::fit(&train, &ClassifierConfig::defaults(ModelKind::Dt))?;
//! assert_eq!(model.predict(&train)?, vec![0, 0, 1, 1]);
//! # Ok::<(), fuzzids::Error>(())
//! ```

pub mod boosting;
pub mod forest;
pub mod impurity;
pub mod naive_bayes;
pub mod svm;
pub mod tree;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use boosting::{apply_update, Booster, GradientBoosting};
pub use forest::Forest;
pub use impurity::{impurity, Impurity};
pub use naive_bayes::{nb_posterior, NaiveBayes, NbVariant};
pub use svm::{svm_decision, Kernel, LinearSvm, SvmModel};
pub use tree::{best_split, SplitCandidate, Tree, TreeNode};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use tree::{GrowParams, RegressionParams, Splitter};

/// Version of the serialized model document.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Index of the largest value; the lowest index wins ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Dt,
    Rf,
    Et,
    Gbt,
    Nb,
    Svm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::Dt,
        ModelKind::Rf,
        ModelKind::Et,
        ModelKind::Gbt,
        ModelKind::Nb,
        ModelKind::Svm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Dt => "dt",
            ModelKind::Rf => "rf",
            ModelKind::Et => "et",
            ModelKind::Gbt => "gbt",
            ModelKind::Nb => "nb",
            ModelKind::Svm => "svm",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown model kind `{s}` (expected dt, rf, et, gbt, nb or svm)")))
    }
}

/// Candidate features examined at each tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeaturesPerSplit {
    /// `max(1, floor(sqrt(d)))`
    Sqrt,
    All,
    Fixed(usize),
}

impl FeaturesPerSplit {
    pub fn resolve(self, n_features: usize) -> usize {
        let k = match self {
            FeaturesPerSplit::Sqrt => (n_features as f64).sqrt().floor() as usize,
            FeaturesPerSplit::All => n_features,
            FeaturesPerSplit::Fixed(k) => k,
        };
        k.clamp(1, n_features.max(1))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WordOrCount {
    Count(usize),
    Word(String),
}

impl Serialize for FeaturesPerSplit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FeaturesPerSplit::Sqrt => s.serialize_str("sqrt"),
            FeaturesPerSplit::All => s.serialize_str("all"),
            FeaturesPerSplit::Fixed(k) => s.serialize_u64(*k as u64),
        }
    }
}

impl<'de> Deserialize<'de> for FeaturesPerSplit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match WordOrCount::deserialize(d)? {
            WordOrCount::Count(k) => Ok(FeaturesPerSplit::Fixed(k)),
            WordOrCount::Word(w) if w == "sqrt" => Ok(FeaturesPerSplit::Sqrt),
            WordOrCount::Word(w) if w == "all" => Ok(FeaturesPerSplit::All),
            WordOrCount::Word(w) => Err(serde::de::Error::custom(format!(
                "features_per_split must be \"sqrt\", \"all\" or an integer, got `{w}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxDepth {
    Unlimited,
    Limited(usize),
}

impl MaxDepth {
    pub fn limit(self) -> Option<usize> {
        match self {
            MaxDepth::Unlimited => None,
            MaxDepth::Limited(d) => Some(d),
        }
    }
}

impl Serialize for MaxDepth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MaxDepth::Unlimited => s.serialize_str("unlimited"),
            MaxDepth::Limited(d) => s.serialize_u64(*d as u64),
        }
    }
}

impl<'de> Deserialize<'de> for MaxDepth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match WordOrCount::deserialize(d)? {
            WordOrCount::Count(k) => Ok(MaxDepth::Limited(k)),
            WordOrCount::Word(w) if w == "unlimited" => Ok(MaxDepth::Unlimited),
            WordOrCount::Word(w) => Err(serde::de::Error::custom(format!(
                "max_depth must be an integer or \"unlimited\", got `{w}`"
            ))),
        }
    }
}

/// Hyperparameters of one classifier. Fields a kind does not use are kept
/// but ignored, so every config serializes the same way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClassifierConfigFile")]
pub struct ClassifierConfig {
    pub kind: ModelKind,
    pub seed: u64,
    pub impurity: Impurity,
    pub max_depth: MaxDepth,
    pub min_samples_split: usize,
    pub n_trees: usize,
    pub features_per_split: FeaturesPerSplit,
    /// Random forests resample rows with replacement for each tree.
    pub bootstrap: bool,
    pub learning_rate: f64,
    pub n_rounds: usize,
    pub reg_gamma: f64,
    pub reg_lambda: f64,
    pub c: f64,
    pub tolerance: f64,
    pub max_iters: usize,
    pub nb_variant: NbVariant,
    pub laplace_alpha: f64,
}

impl ClassifierConfig {
    pub fn defaults(kind: ModelKind) -> Self {
        ClassifierConfig {
            kind,
            seed: 0,
            impurity: Impurity::Entropy,
            max_depth: match kind {
                ModelKind::Gbt => MaxDepth::Limited(6),
                _ => MaxDepth::Unlimited,
            },
            min_samples_split: 2,
            n_trees: 100,
            features_per_split: match kind {
                ModelKind::Rf | ModelKind::Et => FeaturesPerSplit::Sqrt,
                _ => FeaturesPerSplit::All,
            },
            bootstrap: true,
            learning_rate: 0.1,
            n_rounds: 100,
            reg_gamma: 0.0,
            reg_lambda: 1.0,
            c: 1.0,
            tolerance: 1e-4,
            max_iters: 1000,
            nb_variant: NbVariant::Gaussian,
            laplace_alpha: 1.0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("{} config: {msg}", self.kind)));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if self.min_samples_split == 0 {
            return bad("min_samples_split must be >= 1".into());
        }
        if self.n_trees == 0 {
            return bad("n_trees must be >= 1".into());
        }
        if self.features_per_split == FeaturesPerSplit::Fixed(0) {
            return bad("features_per_split must be >= 1".into());
        }
        // a zero rate is accepted: it reduces the model to its base score
        if !nonneg(self.learning_rate) {
            return bad(format!("learning_rate must be >= 0, got {}", self.learning_rate));
        }
        if self.n_rounds == 0 {
            return bad("n_rounds must be >= 1".into());
        }
        if !nonneg(self.reg_gamma) || !nonneg(self.reg_lambda) {
            return bad("reg_gamma and reg_lambda must be >= 0".into());
        }
        if !positive(self.c) {
            return bad(format!("c must be > 0, got {}", self.c));
        }
        if !positive(self.tolerance) {
            return bad(format!("tolerance must be > 0, got {}", self.tolerance));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1".into());
        }
        if !positive(self.laplace_alpha) {
            return bad(format!("laplace_alpha must be > 0, got {}", self.laplace_alpha));
        }
        Ok(())
    }

    fn grow_params(&self, n_features: usize, splitter: Splitter, features: FeaturesPerSplit) -> GrowParams {
        GrowParams {
            impurity: self.impurity,
            max_depth: self.max_depth.limit(),
            min_samples_split: self.min_samples_split,
            max_features: features.resolve(n_features),
            splitter,
        }
    }
}

/// On-disk form: only `kind` is required, the rest default per kind.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifierConfigFile {
    kind: ModelKind,
    seed: Option<u64>,
    impurity: Option<Impurity>,
    max_depth: Option<MaxDepth>,
    min_samples_split: Option<usize>,
    n_trees: Option<usize>,
    features_per_split: Option<FeaturesPerSplit>,
    bootstrap: Option<bool>,
    learning_rate: Option<f64>,
    n_rounds: Option<usize>,
    reg_gamma: Option<f64>,
    reg_lambda: Option<f64>,
    #[serde(alias = "C")]
    c: Option<f64>,
    tolerance: Option<f64>,
    max_iters: Option<usize>,
    nb_variant: Option<NbVariant>,
    laplace_alpha: Option<f64>,
}

impl TryFrom<ClassifierConfigFile> for ClassifierConfig {
    type Error = Error;

    fn try_from(f: ClassifierConfigFile) -> Result<Self> {
        let d = ClassifierConfig::defaults(f.kind);
        let cfg = ClassifierConfig {
            kind: f.kind,
            seed: f.seed.unwrap_or(d.seed),
            impurity: f.impurity.unwrap_or(d.impurity),
            max_depth: f.max_depth.unwrap_or(d.max_depth),
            min_samples_split: f.min_samples_split.unwrap_or(d.min_samples_split),
            n_trees: f.n_trees.unwrap_or(d.n_trees),
            features_per_split: f.features_per_split.unwrap_or(d.features_per_split),
            bootstrap: f.bootstrap.unwrap_or(d.bootstrap),
            learning_rate: f.learning_rate.unwrap_or(d.learning_rate),
            n_rounds: f.n_rounds.unwrap_or(d.n_rounds),
            reg_gamma: f.reg_gamma.unwrap_or(d.reg_gamma),
            reg_lambda: f.reg_lambda.unwrap_or(d.reg_lambda),
            c: f.c.unwrap_or(d.c),
            tolerance: f.tolerance.unwrap_or(d.tolerance),
            max_iters: f.max_iters.unwrap_or(d.max_iters),
            nb_variant: f.nb_variant.unwrap_or(d.nb_variant),
            laplace_alpha: f.laplace_alpha.unwrap_or(d.laplace_alpha),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub tree: Tree,
    pub importances: Vec<f64>,
}

/// Fitted parameters, one variant per model family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelParams {
    Tree(DecisionTree),
    Forest(Forest),
    Boosting(GradientBoosting),
    NaiveBayes(NaiveBayes),
    Svm(SvmModel),
}

/// A fitted classifier together with everything needed to reapply it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub kind: ModelKind,
    pub config: ClassifierConfig,
    /// Class names indexed by class id.
    pub classes: Vec<String>,
    /// Feature columns, in the order the model expects them.
    pub feature_names: Vec<String>,
    pub warnings: Vec<String>,
    pub params: ModelParams,
}

impl TrainedModel {
    pub fn fit(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
        config.validate()?;
        if train.n_rows() == 0 {
            return Err(Error::Training(format!("{}: empty training set", config.kind)));
        }
        let x = train.to_matrix()?;
        let y = train.labels_usize();
        let k = train.n_classes();
        let d = x.cols();
        let mut warnings = Vec::new();

        let params = match config.kind {
            ModelKind::Dt => {
                let grow = config.grow_params(d, Splitter::Best, FeaturesPerSplit::All);
                let mut importances = vec![0.0; d];
                let mut rng = crate::rng::component_rng(config.seed, crate::rng::Domain::Forest, 0);
                let tree = tree::grow_classifier(&x, &y, k, (0..x.rows()).collect(), &grow, &mut rng, &mut importances);
                let total: f64 = importances.iter().sum();
                if total > 0.0 {
                    importances.iter_mut().for_each(|v| *v /= total);
                }
                ModelParams::Tree(DecisionTree { tree, importances })
            }
            ModelKind::Rf | ModelKind::Et => {
                let (splitter, bootstrap) = match config.kind {
                    ModelKind::Rf => (Splitter::Best, config.bootstrap),
                    _ => (Splitter::Random, false),
                };
                let fp = forest::ForestParams {
                    n_trees: config.n_trees,
                    bootstrap,
                    seed: config.seed,
                    grow: config.grow_params(d, splitter, config.features_per_split),
                };
                ModelParams::Forest(forest::fit_forest(&x, &y, k, &fp))
            }
            ModelKind::Gbt => {
                let bp = boosting::BoostParams {
                    n_rounds: config.n_rounds,
                    learning_rate: config.learning_rate,
                    tree: RegressionParams {
                        max_depth: config.max_depth.limit(),
                        min_samples_split: config.min_samples_split,
                        lambda: config.reg_lambda,
                        gamma: config.reg_gamma,
                    },
                };
                ModelParams::Boosting(boosting::fit_gbt(&x, &y, k, &bp)?)
            }
            ModelKind::Nb => {
                let (nb, w) = naive_bayes::fit_nb(&x, &y, k, config.nb_variant, config.laplace_alpha)?;
                warnings.extend(w);
                ModelParams::NaiveBayes(nb)
            }
            ModelKind::Svm => {
                let sp = svm::SvmParams {
                    c: config.c,
                    tolerance: config.tolerance,
                    max_iters: config.max_iters,
                };
                let m = svm::fit_svm(&x, &y, k, &sp);
                for (i, machine) in m.machines.iter().enumerate() {
                    let label = if k == 2 { "binary".to_string() } else { format!("class {i} vs rest") };
                    if machine.degenerate {
                        warnings.push(format!("svm {label}: all training labels identical; constant decision"));
                    } else if !machine.converged {
                        warnings.push(format!(
                            "svm {label}: stopped at max_iters = {} without converging",
                            config.max_iters
                        ));
                    }
                }
                ModelParams::Svm(m)
            }
        };

        Ok(TrainedModel {
            format_version: MODEL_FORMAT_VERSION,
            kind: config.kind,
            config: config.clone(),
            classes: train.schema().class_names(),
            feature_names: train.feature_names(),
            warnings,
            params,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Per-class scores for one row: probabilities for every kind except
    /// the SVM, which reports signed margins.
    pub fn score_row(&self, row: &[f64]) -> Vec<f64> {
        match &self.params {
            ModelParams::Tree(t) => {
                let counts = t.tree.leaf_value(row);
                let total: f64 = counts.iter().sum();
                counts.iter().map(|c| c / total).collect()
            }
            ModelParams::Forest(f) => f.vote_fractions(row),
            ModelParams::Boosting(b) => b.probabilities(row),
            ModelParams::NaiveBayes(nb) => nb_posterior(nb, row),
            ModelParams::Svm(s) => s.margins(row),
        }
    }

    pub fn score_matrix(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.n_features() {
            return Err(Error::SchemaMismatch(format!(
                "model expects {} features, data has {}",
                self.n_features(),
                x.cols()
            )));
        }
        let k = self.n_classes();
        let mut data = Vec::with_capacity(x.rows() * k);
        for i in 0..x.rows() {
            data.extend(self.score_row(x.row(i)));
        }
        Matrix::from_vec(x.rows(), k, data)
    }

    fn check_columns(&self, data: &LabeledDataset) -> Result<Matrix> {
        let names = data.feature_names();
        if names != self.feature_names {
            return Err(Error::SchemaMismatch(format!(
                "model expects features [{}], data has [{}]",
                self.feature_names.join(", "),
                names.join(", ")
            )));
        }
        data.to_matrix()
    }

    /// Per-class scores, one row per sample.
    pub fn score(&self, data: &LabeledDataset) -> Result<Matrix> {
        self.score_matrix(&self.check_columns(data)?)
    }

    pub fn predict_matrix(&self, x: &Matrix) -> Result<Vec<u32>> {
        let scores = self.score_matrix(x)?;
        Ok((0..scores.rows()).map(|i| argmax(scores.row(i)) as u32).collect())
    }

    /// Highest-scoring class per row, lowest id on ties.
    pub fn predict(&self, data: &LabeledDataset) -> Result<Vec<u32>> {
        self.predict_matrix(&self.check_columns(data)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: TrainedModel = serde_json::from_str(text)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Data(format!(
                "unsupported model format version {} (expected {MODEL_FORMAT_VERSION})",
                model.format_version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn fit_kind(kind: ModelKind, train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    if config.kind != kind {
        return Err(Error::Config(format!("expected a {kind} config, got {}", config.kind)));
    }
    TrainedModel::fit(train, config)
}

pub fn fit_dt(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    fit_kind(ModelKind::Dt, train, config)
}

pub fn fit_rf(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    fit_kind(ModelKind::Rf, train, config)
}

pub fn fit_et(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    fit_kind(ModelKind::Et, train, config)
}

pub fn fit_gbt(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    fit_kind(ModelKind::Gbt, train, config)
}

pub fn fit_nb(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    fit_kind(ModelKind::Nb, train, config)
}

pub fn fit_svm(train: &LabeledDataset, config: &ClassifierConfig) -> Result<TrainedModel> {
    fit_kind(ModelKind::Svm, train, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(xs: &[f64], ys: &[u32]) -> LabeledDataset {
        let x = Matrix::from_rows(&xs.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap();
        LabeledDataset::from_matrix("toy", &x, ys.to_vec(), 2).unwrap()
    }

    #[test]
    fn argmax_prefers_lowest_index() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.3, 0.3]), 1);
    }

    #[test]
    fn config_file_fills_defaults() {
        let cfg: ClassifierConfig = toml::from_str("kind = \"gbt\"\nlearning_rate = 0.3").unwrap();
        assert_eq!(cfg.max_depth, MaxDepth::Limited(6));
        assert_eq!(cfg.learning_rate, 0.3);
        let cfg: ClassifierConfig = toml::from_str("kind = \"rf\"\nmax_depth = \"unlimited\"\nfeatures_per_split = 3").unwrap();
        assert_eq!(cfg.features_per_split, FeaturesPerSplit::Fixed(3));
        assert!(toml::from_str::<ClassifierConfig>("kind = \"svm\"\nC = -1.0").is_err());
        assert!(toml::from_str::<ClassifierConfig>("kind = \"svm\"\nkernel = 1").is_err());
    }

    #[test]
    fn config_round_trips() {
        for kind in ModelKind::ALL {
            let cfg = ClassifierConfig::defaults(kind).with_seed(9);
            let text = serde_json::to_string(&cfg).unwrap();
            assert_eq!(serde_json::from_str::<ClassifierConfig>(&text).unwrap(), cfg);
        }
    }

    #[test]
    fn sqrt_features_rounds_down() {
        assert_eq!(FeaturesPerSplit::Sqrt.resolve(41), 6);
        assert_eq!(FeaturesPerSplit::Sqrt.resolve(1), 1);
        assert_eq!(FeaturesPerSplit::Fixed(50).resolve(4), 4);
    }

    #[test]
    fn separable_one_feature_tree_has_depth_one() {
        let ds = toy(&[0.1, 0.2, 0.3, 0.7, 0.8, 0.9], &[0, 0, 0, 1, 1, 1]);
        let m = fit_dt(&ds, &ClassifierConfig::defaults(ModelKind::Dt)).unwrap();
        let ModelParams::Tree(t) = &m.params else { unreachable!() };
        assert_eq!(t.tree.depth(), 1);
        assert_eq!(m.predict(&ds).unwrap(), ds.labels());
    }

    #[test]
    fn depth_zero_predicts_majority() {
        let ds = toy(&[0.1, 0.2, 0.3, 0.9], &[1, 1, 1, 0]);
        let mut cfg = ClassifierConfig::defaults(ModelKind::Dt);
        cfg.max_depth = MaxDepth::Limited(0);
        let m = TrainedModel::fit(&ds, &cfg).unwrap();
        assert_eq!(m.predict(&ds).unwrap(), vec![1; 4]);
    }

    #[test]
    fn kind_mismatch_is_config_error() {
        let ds = toy(&[0.0, 1.0], &[0, 1]);
        let err = fit_rf(&ds, &ClassifierConfig::defaults(ModelKind::Dt)).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn empty_training_set_is_rejected() {
        let ds = toy(&[], &[]);
        assert!(TrainedModel::fit(&ds, &ClassifierConfig::defaults(ModelKind::Nb)).is_err());
    }

    #[test]
    fn feature_count_mismatch_is_rejected() {
        let ds = toy(&[0.0, 1.0], &[0, 1]);
        let m = TrainedModel::fit(&ds, &ClassifierConfig::defaults(ModelKind::Nb)).unwrap();
        let wide = Matrix::from_rows(&[vec![0.0, 1.0]]).unwrap();
        assert!(matches!(m.score_matrix(&wide), Err(Error::SchemaMismatch(_))));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let ds = toy(&[0.11, 0.23, 0.31, 0.72, 0.85, 0.97], &[0, 1, 0, 1, 1, 0]);
        for kind in ModelKind::ALL {
            let mut cfg = ClassifierConfig::defaults(kind).with_seed(3);
            cfg.n_trees = 5;
            cfg.n_rounds = 5;
            let m = TrainedModel::fit(&ds, &cfg).unwrap();
            let back = TrainedModel::from_json(&m.to_json().unwrap()).unwrap();
            assert_eq!(back, m, "{kind}");
            let a = m.score(&ds).unwrap();
            let b = back.score(&ds).unwrap();
            assert_eq!(a, b);
        }
    }
}
