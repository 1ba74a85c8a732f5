use std::fs;
use std::path::Path;

use fuzzids::dataset::{self, DatasetSchema};
use fuzzids::models::TrainedModel;
use fuzzids::pipeline::{emit_report, run_experiment, ExperimentConfig, ReportFormat, RunReport, OUTPUT_DIR_ENV};
use fuzzids::preprocess::Preprocessor;
use tempfile::TempDir;

fn mini() -> (ExperimentConfig, TempDir) {
    let mut cfg =
        ExperimentConfig::from_path(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini/config.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    cfg.output_dir = dir.path().to_path_buf();
    (cfg, dir)
}

fn count_files(dir: &Path) -> usize {
    fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn every_model_meets_every_vector() {
    let (cfg, dir) = mini();
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.cells.len(), cfg.models.len() * report.vectors.len());
    assert_eq!(report.classes, ["negative", "positive"]);
    for sub in ["models", "roc", "confusion"] {
        assert_eq!(count_files(&dir.path().join(sub)), report.cells.len(), "{sub}");
    }
    for f in ["config.toml", "split.json", "preprocessor.json", "ranking.json", "report.json", "timings.json"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    assert_eq!(RunReport::load(dir.path()).unwrap().to_json().unwrap(), report.to_json().unwrap());
}

#[test]
fn preprocessor_sees_only_training_rows() {
    let (cfg, dir) = mini();
    run_experiment(&cfg).unwrap();
    let split: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("split.json")).unwrap()).unwrap();
    let train_idx: Vec<usize> = split["train"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as usize)
        .collect();
    let schema = DatasetSchema::from_path(cfg.resolve(&cfg.data.schema)).unwrap();
    let raw = dataset::load_csv(cfg.resolve(&cfg.data.train), &schema).unwrap();
    assert!(train_idx.len() < raw.n_rows());
    let expected = Preprocessor::fit(&raw.subset(&train_idx)).unwrap();
    let saved: Preprocessor =
        serde_json::from_str(&fs::read_to_string(dir.path().join("preprocessor.json")).unwrap()).unwrap();
    assert_eq!(saved, expected);
}

#[test]
fn saved_models_keep_their_vector() {
    let (cfg, dir) = mini();
    let report = run_experiment(&cfg).unwrap();
    let cell = &report.cells[0];
    let model = TrainedModel::load(dir.path().join("models").join(format!("{}.json", cell.id()))).unwrap();
    assert_eq!(model.feature_names, cell.features);
}

#[test]
fn emit_report_writes_each_format() {
    let (cfg, dir) = mini();
    let report = run_experiment(&cfg).unwrap();
    let out = tempfile::tempdir().unwrap();
    let written = emit_report(&report, out.path(), &ReportFormat::ALL).unwrap();
    assert!(written.iter().all(|p| p.is_file()));
    assert_eq!(count_files(&out.path().join("roc")), report.cells.len());
    assert_eq!(count_files(&out.path().join("confusion")), report.cells.len());
    for f in ["metrics.csv", "features.csv"] {
        assert_eq!(
            fs::read_to_string(out.path().join(f)).unwrap(),
            fs::read_to_string(dir.path().join(f)).unwrap()
        );
    }
    let table = fs::read_to_string(out.path().join("metrics.csv")).unwrap();
    assert_eq!(table.lines().count(), report.cells.len() + 1);
}

#[test]
fn no_models_still_ranks_features() {
    let (mut cfg, dir) = mini();
    cfg.models.clear();
    let report = run_experiment(&cfg).unwrap();
    assert!(report.cells.is_empty());
    assert_eq!(report.vectors.len(), 4);
    assert!(dir.path().join("ranking.json").is_file());
}

#[test]
fn output_dir_can_come_from_the_environment() {
    let (mut cfg, _dir) = mini();
    let other = tempfile::tempdir().unwrap();
    std::env::set_var(OUTPUT_DIR_ENV, other.path());
    cfg.apply_env_override();
    std::env::remove_var(OUTPUT_DIR_ENV);
    assert_eq!(cfg.output_path(), other.path());
}

#[test]
fn missing_data_is_a_data_error() {
    let (mut cfg, _dir) = mini();
    cfg.data.test = "nowhere.csv".into();
    let err = run_experiment(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
