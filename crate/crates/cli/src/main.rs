use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuzzids::dataset::{self, DatasetSchema};
use fuzzids::fuzzy_select::{
    fuse_with_et_importance, fuzzy_importance, select_vectors, FeatureRanking, FeatureVectorSpec,
    TriangularParams,
};
use fuzzids::models::{ClassifierConfig, ModelKind, ModelParams, TrainedModel};
use fuzzids::pipeline::{emit_report, metrics_table, run_experiment, ExperimentConfig, ReportFormat, RunReport};
use fuzzids::preprocess::Preprocessor;
use fuzzids::{Error, Result};

/// Fuzzy feature ranking and intrusion-detection classifiers.
///
/// Exit codes: 0 success, 1 configuration or usage error, 2 data error,
/// 3 training error.
#[derive(Parser)]
#[command(name = "fuzzids", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a CSV file against a schema and report its class distribution.
    Ingest {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        /// Where to write the JSON report; stdout if omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Fit scaling and encoding on one file and apply it to others.
    ///
    /// Writes `preprocessor.json`, the numeric `schema.toml`, one CSV per
    /// input file and `transform_report.json` to the output directory.
    Preprocess {
        #[arg(long)]
        train: PathBuf,
        /// Further files to transform with the state fitted on `--train`.
        #[arg(long, num_args = 1..)]
        apply: Vec<PathBuf>,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Rank the features of preprocessed data and cut named vectors.
    Select {
        #[arg(long)]
        data: PathBuf,
        /// Defaults to `schema.toml` next to the data file.
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Triangle feet and peak as `a,b,c`.
        #[arg(long, default_value = "0,0.5,1")]
        params: String,
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        names: Vec<String>,
        /// Blend with extra-trees importances; 1 keeps fuzzy scores only.
        #[arg(long, default_value_t = 1.0)]
        et_weight: f64,
        /// Seed of the extra-trees fit used for blending.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train one classifier on one feature vector.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        /// `<selection.json>#<name>`, `<selection.json>` for its first
        /// vector, or a comma-separated list of feature names.
        #[arg(long)]
        vector: String,
        #[arg(long)]
        model: ModelKind,
        /// TOML file of hyperparameters; unset ones take the kind's defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a labelled CSV file with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a full experiment from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Render a finished run.
    Report {
        #[arg(long)]
        run: PathBuf,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ingest { data, schema, report } => ingest(&data, &schema, report.as_deref()),
        Command::Preprocess {
            train,
            apply,
            schema,
            out_dir,
        } => preprocess(&train, &apply, &schema, &out_dir),
        Command::Select {
            data,
            schema,
            params,
            lengths,
            names,
            et_weight,
            seed,
            out,
        } => select(&data, schema.as_deref(), &params, &lengths, &names, et_weight, seed, &out),
        Command::Train {
            data,
            schema,
            vector,
            model,
            config,
            out,
        } => train(&data, schema.as_deref(), &vector, model, config.as_deref(), &out),
        Command::Predict {
            model,
            data,
            schema,
            out,
        } => predict(&model, &data, schema.as_deref(), &out),
        Command::Run { config } => run(&config),
        Command::Report { run, format } => report(&run, format),
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_schema(data: &Path, schema: Option<&Path>) -> Result<DatasetSchema> {
    let path = match schema {
        Some(p) => p.to_path_buf(),
        None => data.parent().unwrap_or(Path::new(".")).join("schema.toml"),
    };
    DatasetSchema::from_path(path)
}

fn ingest(data: &Path, schema: &Path, report: Option<&Path>) -> Result<()> {
    let schema = DatasetSchema::from_path(schema)?;
    let (ds, load) = dataset::load_csv_with_report(data, &schema)?;
    let counts: serde_json::Map<String, serde_json::Value> = dataset::class_distribution(&ds)
        .into_iter()
        .map(|(id, n)| (schema.class_name(id).unwrap_or("?").to_string(), n.into()))
        .collect();
    let doc = serde_json::json!({
        "dataset": schema.name,
        "rows": load.rows,
        "header_reordered": load.header_reordered,
        "ignored_columns": load.ignored_columns,
        "class_counts": counts,
    });
    let text = to_json(&doc)?;
    match report {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn preprocess(train: &Path, apply: &[PathBuf], schema: &Path, out_dir: &Path) -> Result<()> {
    let schema = DatasetSchema::from_path(schema)?;
    let train_ds = dataset::load_csv(train, &schema)?;
    let pre = Preprocessor::fit(&train_ds)?;
    write(&out_dir.join("preprocessor.json"), &to_json(&pre)?)?;
    write(&out_dir.join("schema.toml"), &schema.all_numeric().to_toml_string())?;
    let mut reports = serde_json::Map::new();
    for input in std::iter::once(train).chain(apply.iter().map(PathBuf::as_path)) {
        let ds = if input == train {
            train_ds.clone()
        } else {
            dataset::load_csv(input, &schema)?
        };
        let (out, report) = pre.apply(&ds)?;
        let name = input.file_name().map_or_else(|| "data.csv".into(), |n| n.to_string_lossy().into_owned());
        out.write_csv(out_dir.join(&name))?;
        reports.insert(name, serde_json::to_value(&report)?);
    }
    write(&out_dir.join("transform_report.json"), &to_json(&reports)?)
}

#[allow(clippy::too_many_arguments)]
fn select(
    data: &Path,
    schema: Option<&Path>,
    params: &str,
    lengths: &[usize],
    names: &[String],
    et_weight: f64,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let schema = load_schema(data, schema)?;
    let ds = dataset::load_csv(data, &schema)?;
    let params = TriangularParams::parse(params)?;
    let mut ranking = fuzzy_importance(&ds, &params)?;
    if et_weight < 1.0 {
        let et = TrainedModel::fit(&ds, &ClassifierConfig::defaults(ModelKind::Et).with_seed(seed))?;
        if let ModelParams::Forest(f) = &et.params {
            ranking = fuse_with_et_importance(&ranking, &f.importances, et_weight)?;
        }
    }
    let vectors = select_vectors(&ranking, lengths, names)?;
    let doc = SelectionDoc {
        params,
        ranking,
        vectors,
    };
    write(out, &to_json(&doc)?)
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SelectionDoc {
    params: TriangularParams,
    ranking: FeatureRanking,
    vectors: Vec<FeatureVectorSpec>,
}

fn resolve_vector(spec: &str) -> Result<Vec<String>> {
    let (file, name) = match spec.rsplit_once('#') {
        Some((f, n)) => (f, Some(n)),
        None => (spec, None),
    };
    let path = Path::new(file);
    if !path.is_file() {
        if name.is_some() {
            return Err(Error::Config(format!("{file}: no such selection file")));
        }
        return Ok(spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let doc: SelectionDoc =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{file}: not a selection document: {e}")))?;
    let v = match name {
        Some(n) => doc.vectors.into_iter().find(|v| v.name == n),
        None => doc.vectors.into_iter().next(),
    };
    v.map(|v| v.features)
        .ok_or_else(|| Error::Config(format!("{spec}: no such vector")))
}

fn train(
    data: &Path,
    schema: Option<&Path>,
    vector: &str,
    kind: ModelKind,
    config: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let cfg = match config {
        None => ClassifierConfig::defaults(kind),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            let mut table: toml::Table =
                toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", p.display(), e.message())))?;
            match table.get("kind").and_then(toml::Value::as_str) {
                Some(k) if k != kind.as_str() => {
                    return Err(Error::Config(format!("{}: kind `{k}` conflicts with --model {kind}", p.display())))
                }
                _ => {
                    table.insert("kind".into(), kind.as_str().into());
                }
            }
            toml::Value::Table(table)
                .try_into()
                .map_err(|e: toml::de::Error| Error::Config(format!("{}: {}", p.display(), e.message())))?
        }
    };
    let schema = load_schema(data, schema)?;
    let ds = dataset::load_csv(data, &schema)?;
    let features = resolve_vector(vector)?;
    let projected = ds.select_named(&features)?;
    let model = TrainedModel::fit(&projected, &cfg)?;
    for w in &model.warnings {
        eprintln!("warning: {w}");
    }
    model.save(out)
}

fn predict(model: &Path, data: &Path, schema: Option<&Path>, out: &Path) -> Result<()> {
    let model = TrainedModel::load(model)?;
    let schema = load_schema(data, schema)?;
    let ds = dataset::load_csv(data, &schema)?.select_named(&model.feature_names)?;
    let scores = model.score(&ds)?;
    let predicted = model.predict(&ds)?;
    let mut text = String::from("row,predicted");
    for c in &model.classes {
        text.push_str(",score_");
        text.push_str(c);
    }
    text.push('\n');
    for (i, p) in predicted.iter().enumerate() {
        text.push_str(&format!("{i},{}", model.classes[*p as usize]));
        for s in scores.row(i) {
            text.push_str(&format!(",{s}"));
        }
        text.push('\n');
    }
    write(out, &text)
}

fn run(config: &Path) -> Result<()> {
    let mut cfg = ExperimentConfig::from_path(config)?;
    cfg.apply_env_override();
    let report = run_experiment(&cfg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", metrics_table(&report));
    eprintln!("wrote {}", cfg.output_path().display());
    Ok(())
}

fn report(run_dir: &Path, format: ReportFormat) -> Result<()> {
    let report = RunReport::load(run_dir)?;
    if format == ReportFormat::Table {
        print!("{}", metrics_table(&report));
    }
    for p in emit_report(&report, run_dir, &[format])? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}


