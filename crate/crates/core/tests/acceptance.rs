//! Acceptance checks. Prints one PASS, FAIL or SKIP line per criterion and
//! exits non-zero if any criterion fails.
//!
//! The full-corpus checks run only when `FUZZIDS_UGRANSOME_TRAIN` and
//! `FUZZIDS_UGRANSOME_TEST` point at the real UGRansome files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fuzzids::dataset::{self, DatasetSchema, SplitSpec};
use fuzzids::evaluate::{auc, confusion, f1_score, metrics, roc_curve, Ratio};
use fuzzids::fuzzy_select::{fuzzy_importance, triangular_membership, TriangularParams};
use fuzzids::models::{ClassifierConfig, ModelKind, ModelParams, TrainedModel};
use fuzzids::pipeline::{run_experiment, ExperimentConfig, RunReport};
use fuzzids::synthetic::{peaked_features, random_classification, xor_benchmark};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let checks: [(&str, Duration, Check); 10] = [
        ("1 f1 anchor", Duration::from_secs(1), f1_anchor),
        ("2 metric oracle", Duration::from_secs(5), metric_oracle),
        ("3 auc oracle", Duration::from_secs(10), auc_oracle),
        ("4 fuzzy ranking", Duration::from_secs(1), fuzzy_ranking),
        ("5 membership", Duration::from_secs(1), membership),
        ("6 xor ordering", Duration::from_secs(30), xor_ordering),
        ("7 objective monotone", Duration::from_secs(60), objectives),
        ("8 determinism", Duration::from_secs(60), determinism),
        ("9 full ugransome", Duration::from_secs(3600), full_ugransome),
        ("10 split proportion", Duration::from_secs(60), split_proportion),
    ];
    let mut failed = 0;
    for (name, budget, check) in checks {
        let t = Instant::now();
        let outcome = check();
        let took = t.elapsed();
        let outcome = match outcome {
            Pass(msg) if took > budget => Fail(format!("{msg}; took {took:.2?}, budget {budget:.0?}")),
            o => o,
        };
        match outcome {
            Pass(msg) => println!("PASS {name}: {msg} ({took:.2?})"),
            Fail(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} ({took:.2?})");
            }
            Skip(msg) => println!("SKIP {name}: {msg}"),
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn f1_anchor() -> Outcome {
    let f1 = f1_score(0.950, 0.806);
    let msg = format!("F1(0.950, 0.806) = {f1:.5}, expected 0.870 ± 0.0005");
    if (f1 - 0.870).abs() <= 0.0005 {
        Pass(msg)
    } else {
        Fail(msg)
    }
}

fn metric_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for set in 0..1000 {
        let k = rng.random_range(2..=5usize);
        let n = rng.random_range(1..=300usize);
        let truth: Vec<u32> = (0..n).map(|_| rng.random_range(0..k as u32)).collect();
        let pred: Vec<u32> = (0..n).map(|_| rng.random_range(0..k as u32)).collect();
        let cm = confusion(&truth, &pred, k).unwrap();
        let pos = rng.random_range(0..k);
        let b = cm.binary_view(pos);
        let p = pos as u32;
        let count = |f: &dyn Fn(u32, u32) -> bool| truth.iter().zip(&pred).filter(|(&t, &y)| f(t, y)).count() as u64;
        let tp = count(&|t, y| t == p && y == p);
        let fp = count(&|t, y| t != p && y == p);
        let fn_ = count(&|t, y| t == p && y != p);
        let tn = count(&|t, y| t != p && y != p);
        let pairs = [
            ("accuracy", b.accuracy(), Ratio::new(tp + tn, n as u64)),
            ("precision", b.precision(), Ratio::new(tp, tp + fp)),
            ("recall", b.recall(), Ratio::new(tp, tp + fn_)),
            ("f1", b.f1(), Ratio::new(2 * tp, 2 * tp + fp + fn_)),
            ("error", b.error(), Ratio::new(fp + fn_, n as u64)),
        ];
        for (name, got, want) in pairs {
            if !got.same_as(want) {
                return Fail(format!("set {set}: {name} {got:?} != {want:?}"));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let c = count(&|t, y| t == i as u32 && y == j as u32);
                if cm.counts[i][j] != c {
                    return Fail(format!("set {set}: cell ({i}, {j}) {} != {c}", cm.counts[i][j]));
                }
            }
        }
        let m = metrics(&cm, pos);
        if m.accuracy != b.accuracy().value()
            || m.precision != b.precision().value()
            || m.recall != b.recall().value()
            || (m.f1 - b.f1().value()).abs() > 1e-12
            || (m.error - b.error().value()).abs() > 1e-12
        {
            return Fail(format!("set {set}: float metrics disagree with ratios: {m:?}"));
        }
    }
    Pass("1000 sets agree".into())
}

fn wilcoxon(truth: &[bool], scores: &[f64]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &ti) in truth.iter().enumerate() {
        if !ti {
            continue;
        }
        for (j, &tj) in truth.iter().enumerate() {
            if tj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

fn auc_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for set in 0..200 {
        let n = rng.random_range(2..=400usize);
        let mut truth: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        truth[0] = true;
        truth[1] = false;
        // coarse levels on half the sets so ties occur
        let levels = if set % 2 == 0 { 10.0 } else { 1e9 };
        let scores: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * levels).floor() / levels).collect();
        let a = auc(&roc_curve(&truth, &scores).unwrap());
        let w = wilcoxon(&truth, &scores);
        worst = worst.max((a - w).abs());
        if (a - w).abs() > 1e-12 {
            return Fail(format!("set {set}: trapezoid {a} vs pairwise {w}"));
        }
    }
    let truth: Vec<bool> = (0..100).map(|i| i % 3 == 0).collect();
    let perfect: Vec<f64> = truth.iter().map(|&t| if t { 1.0 } else { 0.0 }).collect();
    let inverted: Vec<f64> = perfect.iter().map(|s| 1.0 - s).collect();
    let (p, q) = (
        auc(&roc_curve(&truth, &perfect).unwrap()),
        auc(&roc_curve(&truth, &inverted).unwrap()),
    );
    if p != 1.0 || q != 0.0 {
        return Fail(format!("perfect {p}, inverted {q}"));
    }
    let truth: Vec<bool> = (0..10_000).map(|i| i % 2 == 0).collect();
    let scores: Vec<f64> = (0..10_000).map(|_| rng.random()).collect();
    let u = auc(&roc_curve(&truth, &scores).unwrap());
    if (u - 0.5).abs() > 0.05 {
        return Fail(format!("uniform scores give {u}"));
    }
    Pass(format!("max |trapezoid - pairwise| = {worst:.1e}; uniform {u:.4}"))
}

fn fuzzy_ranking() -> Outcome {
    for seed in 0..5 {
        let (ds, peaked) = peaked_features(500, 20, 5, seed).unwrap();
        let ranking = fuzzy_importance(&ds, &TriangularParams::default()).unwrap();
        let mut top: Vec<usize> = ranking.order[..5].to_vec();
        top.sort_unstable();
        if top != peaked {
            return Fail(format!("seed {seed}: top five {top:?}, peaked {peaked:?}"));
        }
    }
    Pass("peaked columns rank first for 5 seeds".into())
}

fn membership() -> Outcome {
    let triples = [(0.0, 0.5, 1.0), (0.25, 0.5, 1.0), (-1.0, 0.0, 2.0), (0.0, 0.125, 0.75)];
    for (a, b, c) in triples {
        let p = TriangularParams::new(a, b, c).unwrap();
        let mu = |x| triangular_membership(x, &p);
        if mu(b) != 1.0 || mu(a) != 0.0 || mu(c) != 0.0 || mu((a + b) / 2.0) != 0.5 {
            return Fail(format!("({a}, {b}, {c}): anchor values off"));
        }
        let n = 10_000;
        let h = (c - a) / n as f64;
        let slope = (1.0 / (b - a)).max(1.0 / (c - b));
        let max_step = (0..n)
            .map(|i| (mu(a + (i + 1) as f64 * h) - mu(a + i as f64 * h)).abs())
            .fold(0.0, f64::max);
        if max_step >= 10.0 * h * slope {
            return Fail(format!("({a}, {b}, {c}): step {max_step} on the grid"));
        }
    }
    Pass(format!("{} triangles", triples.len()))
}

fn accuracy(model: &TrainedModel, ds: &dataset::LabeledDataset) -> f64 {
    let pred = model.predict(ds).unwrap();
    pred.iter().zip(ds.labels()).filter(|(a, b)| a == b).count() as f64 / pred.len() as f64
}

fn xor_ordering() -> Outcome {
    let (train, test) = xor_benchmark(7).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for kind in [ModelKind::Dt, ModelKind::Rf, ModelKind::Et, ModelKind::Gbt, ModelKind::Nb] {
        let model = TrainedModel::fit(&train, &ClassifierConfig::defaults(kind).with_seed(7)).unwrap();
        let acc = accuracy(&model, &test);
        ok &= if kind == ModelKind::Nb { acc <= 0.65 } else { acc >= 0.95 };
        lines.push(format!("{kind} {acc:.3}"));
    }
    if ok {
        Pass(lines.join(", "))
    } else {
        Fail(lines.join(", "))
    }
}

fn monotone(trace: &[f64]) -> bool {
    trace.windows(2).all(|w| w[1] <= w[0] + 1e-6)
}

fn objectives() -> Outcome {
    for i in 0..20u64 {
        let ds = random_classification(80, 5, 2 + (i % 2) as usize, i).unwrap();
        let svm = TrainedModel::fit(&ds, &ClassifierConfig::defaults(ModelKind::Svm).with_seed(i)).unwrap();
        if let ModelParams::Svm(s) = &svm.params {
            if let Some(m) = s.machines.iter().find(|m| !monotone(&m.objective)) {
                return Fail(format!("dataset {i}: SVM objective rises: {:?}", m.objective));
            }
        }
        let mut cfg = ClassifierConfig::defaults(ModelKind::Gbt).with_seed(i);
        cfg.n_rounds = 50;
        let gbt = TrainedModel::fit(&ds, &cfg).unwrap();
        if let ModelParams::Boosting(g) = &gbt.params {
            if let Some(b) = g.boosters.iter().find(|b| !monotone(&b.objective)) {
                return Fail(format!("dataset {i}: GBT objective rises: {:?}", b.objective));
            }
        }
    }
    Pass("20 datasets".into())
}

fn mini_config() -> ExperimentConfig {
    ExperimentConfig::from_path(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini/config.toml")).unwrap()
}

/// Every JSON path in `v` with the type found there. Array elements share
/// one path; keys of per-column count maps are data, so they collapse too.
fn shape(v: &Value, path: String, out: &mut BTreeSet<String>) {
    match v {
        Value::Object(m) => {
            let data_keys = path.ends_with(".clamped") || path.ends_with(".unseen");
            for (k, v) in m {
                shape(v, format!("{path}.{}", if data_keys { "*" } else { k }), out);
            }
        }
        Value::Array(a) => {
            out.insert(format!("{path}[]"));
            for v in a {
                shape(v, format!("{path}[]"), out);
            }
        }
        Value::Number(_) => {
            out.insert(format!("{path}: number"));
        }
        Value::String(_) => {
            out.insert(format!("{path}: string"));
        }
        Value::Bool(_) => {
            out.insert(format!("{path}: bool"));
        }
        Value::Null => {
            out.insert(format!("{path}: null"));
        }
    }
}

fn determinism() -> Outcome {
    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let mut reports = Vec::new();
    for (i, dir) in dirs.iter().enumerate() {
        let mut cfg = mini_config();
        cfg.output_dir = dir.path().to_path_buf();
        if i == 2 {
            cfg.seed += 1;
        }
        if let Err(e) = run_experiment(&cfg) {
            return Fail(format!("run {i}: {e}"));
        }
        let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
        reports.push((read("report.json"), read("split.json")));
    }
    if reports[0].0 != reports[1].0 {
        return Fail("same config gave different report.json bytes".into());
    }
    if reports[0].1 == reports[2].1 {
        return Fail("changing the seed left the split unchanged".into());
    }
    let parse = |s: &str| {
        let mut out = BTreeSet::new();
        shape(&serde_json::from_str::<Value>(s).unwrap(), String::new(), &mut out);
        out
    };
    if parse(&reports[0].0) != parse(&reports[2].0) {
        return Fail("changing the seed changed the report layout".into());
    }
    let r = RunReport::load(dirs[0].path()).unwrap();
    Pass(format!("{} cells, {} bytes, identical", r.cells.len(), reports[0].0.len()))
}

fn ugransome_files() -> Option<(PathBuf, PathBuf)> {
    let train = std::env::var_os("FUZZIDS_UGRANSOME_TRAIN")?;
    let test = std::env::var_os("FUZZIDS_UGRANSOME_TEST")?;
    Some((train.into(), test.into()))
}

const SKIP_MSG: &str = "set FUZZIDS_UGRANSOME_TRAIN and FUZZIDS_UGRANSOME_TEST to run";

fn schema_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/schemas/ugransome.toml")
}

/// Reference binary results as (model, vector, VAC, TAC).
const REFERENCE: [(&str, &str, f64, f64); 8] = [
    ("rf", "v1", 0.999, 0.875),
    ("rf", "v2", 0.999, 0.874),
    ("rf", "v3", 0.999, 0.874),
    ("rf", "v4", 0.999, 0.873),
    ("nb", "v1", 0.842, 0.786),
    ("nb", "v2", 0.905, 0.802),
    ("nb", "v3", 0.889, 0.804),
    ("nb", "v4", 0.883, 0.806),
];

fn full_ugransome() -> Outcome {
    let Some((train, test)) = ugransome_files() else {
        return Skip(SKIP_MSG.into());
    };
    let out = tempfile::tempdir().unwrap();
    let text = format!(
        "seed = 0\ntask = \"binary\"\noutput_dir = {:?}\n\n[data]\ntrain = {:?}\ntest = {:?}\nschema = {:?}\n\n\
         [[models]]\nkind = \"rf\"\n\n[[models]]\nkind = \"nb\"\n",
        out.path(),
        train,
        test,
        schema_path()
    );
    let report = match ExperimentConfig::from_toml_str(&text).and_then(|c| run_experiment(&c)) {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for v in &report.vectors {
        let (Some(rf), Some(nb)) = (report.cell("rf", &v.name), report.cell("nb", &v.name)) else {
            return Fail(format!("missing cells for {}", v.name));
        };
        let (rf_vac, rf_tac, nb_tac) = (rf.validation.accuracy, rf.test.accuracy, nb.test.accuracy);
        if rf_vac < 0.95 {
            problems.push(format!("rf/{} VAC {rf_vac:.3} < 0.95", v.name));
        }
        if rf_tac < nb_tac {
            problems.push(format!("rf/{} TAC {rf_tac:.3} < nb {nb_tac:.3}", v.name));
        }
        for (model, vector, vac, tac) in REFERENCE {
            if vector != v.name {
                continue;
            }
            let cell = if model == "rf" { rf } else { nb };
            for (what, got, want) in [("VAC", cell.validation.accuracy, vac), ("TAC", cell.test.accuracy, tac)] {
                if (got - want).abs() > 0.05 {
                    notes.push(format!("{model}/{vector} {what} {got:.3} vs reference {want:.3}"));
                }
            }
        }
    }
    for n in &notes {
        println!("  note: {n}");
    }
    if problems.is_empty() {
        Pass(format!("{} vectors, {} deviations beyond 5 points", report.vectors.len(), notes.len()))
    } else {
        Fail(problems.join("; "))
    }
}

fn split_proportion() -> Outcome {
    let Some((train, _)) = ugransome_files() else {
        return Skip(SKIP_MSG.into());
    };
    let schema = DatasetSchema::from_path(schema_path()).unwrap();
    let ds = match dataset::load_csv(&train, &schema) {
        Ok(ds) => ds,
        Err(e) => return Fail(e.to_string()),
    };
    let part = dataset::stratified_split(&ds, &SplitSpec::new(0.7, 0.3, 0).unwrap()).unwrap();
    let (t, v) = (part.train.n_rows() as f64, part.validation.n_rows() as f64);
    let share = v / (t + v);
    let msg = format!("validation share {share:.4} of {} rows", t + v);
    if (share - 0.30).abs() <= 0.01 {
        Pass(msg)
    } else {
        Fail(msg)
    }
}
