//! Confusion matrices, precision/recall/accuracy/F1/error, ROC curves and AUC.
//!
//! Ratios whose denominator is zero evaluate to 0 and are listed in the
//! report's `undefined` field, so reports never contain NaN.
//!
//! ```
//! use fuzzids::evaluate::{confusion, metrics};
//!
//! let cm = confusion(&[1, 1, 0, 0], &[1, 0, 0, 0], 2)?;
//! let b = cm.binary_view(1);
//! assert_eq!((b.tp, b.fn_, b.tn, b.fp), (1, 1, 2, 0));
//! let m = metrics(&cm, 1);
//! assert_eq!(m.accuracy, 0.75);
//! assert_eq!(m.precision, 1.0);
//! # Ok::<(), fuzzids::Error>(())
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `K×K` counts; entry `(i, j)` is the number of samples of true class `i`
/// predicted as class `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

/// Two-class view of a confusion matrix around one positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryCounts {
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tp: u64,
}

/// An exact non-negative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    pub fn is_undefined(self) -> bool {
        self.den == 0
    }

    /// `num / den`, or 0 for `0/0`.
    pub fn value(self) -> f64 {
        if self.den == 0 {
            0.0
        } else {
            self.num as f64 / self.den as f64
        }
    }

    /// Equality as rational numbers; `0/0` equals only `0/0`.
    pub fn same_as(self, other: Ratio) -> bool {
        if self.den == 0 || other.den == 0 {
            return self.den == other.den && self.num == other.num;
        }
        u128::from(self.num) * u128::from(other.den) == u128::from(other.num) * u128::from(self.den)
    }
}

impl BinaryCounts {
    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }

    pub fn precision(&self) -> Ratio {
        Ratio::new(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> Ratio {
        Ratio::new(self.tp, self.tp + self.fn_)
    }

    pub fn accuracy(&self) -> Ratio {
        Ratio::new(self.tp + self.tn, self.total())
    }

    pub fn error(&self) -> Ratio {
        Ratio::new(self.fp + self.fn_, self.total())
    }

    /// `2·TP / (2·TP + FP + FN)`, the harmonic mean of precision and recall.
    pub fn f1(&self) -> Ratio {
        Ratio::new(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }
}

impl ConfusionMatrix {
    pub fn zeros(n_classes: usize) -> Self {
        ConfusionMatrix {
            counts: vec![vec![0; n_classes]; n_classes],
        }
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Samples whose true class is `k`.
    pub fn support(&self, k: usize) -> u64 {
        self.counts[k].iter().sum()
    }

    /// One-vs-rest counts for class `positive`.
    pub fn binary_view(&self, positive: usize) -> BinaryCounts {
        let tp = self.counts[positive][positive];
        let fn_ = self.support(positive) - tp;
        let fp = (0..self.n_classes()).map(|i| self.counts[i][positive]).sum::<u64>() - tp;
        let tn = self.total() - tp - fn_ - fp;
        BinaryCounts { tn, fp, fn_, tp }
    }

    /// Rows are true classes, columns predicted classes.
    pub fn to_csv(&self, class_names: &[String]) -> String {
        let mut out = String::from("true\\predicted");
        for name in class_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, row) in self.counts.iter().enumerate() {
            out.push_str(&class_names[i]);
            for c in row {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn confusion(truth: &[u32], predicted: &[u32], n_classes: usize) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::Data(format!(
            "{} true labels but {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    let mut cm = ConfusionMatrix::zeros(n_classes);
    for (&t, &p) in truth.iter().zip(predicted) {
        if t as usize >= n_classes || p as usize >= n_classes {
            return Err(Error::Data(format!("label {} out of range for {n_classes} classes", t.max(p))));
        }
        cm.counts[t as usize][p as usize] += 1;
    }
    Ok(cm)
}

/// Harmonic mean of precision and recall; 0 when both are 0.
///
/// ```
/// use fuzzids::evaluate::f1_score;
///
/// assert!((f1_score(0.8, 0.5) - 0.8 / 1.3).abs() < 1e-15);
/// assert_eq!(f1_score(0.0, 0.0), 0.0);
/// ```
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// `1 - accuracy`.
    pub error: f64,
    /// Names of metrics whose denominator was zero.
    pub undefined: Vec<String>,
}

/// Binary metrics of `cm` with `positive` as the positive class.
pub fn metrics(cm: &ConfusionMatrix, positive: usize) -> ScalarMetrics {
    let b = cm.binary_view(positive);
    let mut undefined = Vec::new();
    for (name, r) in [("precision", b.precision()), ("recall", b.recall()), ("accuracy", b.accuracy())] {
        if r.is_undefined() {
            undefined.push(name.to_string());
        }
    }
    let precision = b.precision().value();
    let recall = b.recall().value();
    if precision + recall == 0.0 {
        undefined.push("f1".into());
    }
    let accuracy = b.accuracy().value();
    ScalarMetrics {
        accuracy,
        precision,
        recall,
        f1: f1_score(precision, recall),
        error: 1.0 - accuracy,
        undefined,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: u32,
    pub support: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub undefined: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroMetrics {
    /// `trace / N`.
    pub accuracy: f64,
    pub error: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub per_class: Vec<ClassMetrics>,
}

/// One-vs-rest metrics per class with unweighted means.
pub fn macro_metrics(cm: &ConfusionMatrix) -> MacroMetrics {
    let k = cm.n_classes();
    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|c| {
            let m = metrics(cm, c);
            let mut undefined: Vec<String> = m.undefined.into_iter().filter(|n| n != "accuracy").collect();
            if cm.support(c) == 0 {
                undefined.push("support".into());
            }
            ClassMetrics {
                class: c as u32,
                support: cm.support(c),
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
                undefined,
            }
        })
        .collect();
    let mean = |f: fn(&ClassMetrics) -> f64| {
        if k == 0 {
            0.0
        } else {
            per_class.iter().map(f).sum::<f64>() / k as f64
        }
    };
    let accuracy = Ratio::new(cm.trace(), cm.total()).value();
    MacroMetrics {
        accuracy,
        error: 1.0 - accuracy,
        macro_precision: mean(|c| c.precision),
        macro_recall: mean(|c| c.recall),
        macro_f1: mean(|c| c.f1),
        per_class,
    }
}

fn threshold_json<S: Serializer>(t: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if t.is_finite() {
        s.serialize_f64(*t)
    } else {
        s.serialize_none()
    }
}

fn threshold_from_json<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// One operating point: samples scoring `>= threshold` are called positive.
/// The first point of every curve has threshold `+∞` (stored as `null`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    #[serde(serialize_with = "threshold_json", deserialize_with = "threshold_from_json")]
    pub threshold: f64,
}

/// ROC curve over every distinct score, highest first. Tied scores move the
/// curve in a single diagonal step.
pub fn roc_curve(truth: &[bool], scores: &[f64]) -> Result<Vec<RocPoint>> {
    if truth.len() != scores.len() {
        return Err(Error::Data(format!("{} labels but {} scores", truth.len(), scores.len())));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::Data(format!("non-finite score {s}")));
    }
    let pos = truth.iter().filter(|&&t| t).count() as u64;
    let neg = truth.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Data("ROC needs at least one positive and one negative sample".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if truth[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
            threshold: s,
        });
    }
    Ok(points)
}

/// Trapezoidal area under a ROC curve.
pub fn auc(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

/// ROC points as `fpr,tpr,threshold` rows; the `+∞` threshold is written as
/// `inf`.
pub fn roc_to_csv(points: &[RocPoint]) -> String {
    let mut out = String::from("fpr,tpr,threshold\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.fpr, p.tpr, p.threshold);
    }
    out
}

/// One-vs-rest curve of one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRoc {
    pub class: u32,
    pub auc: f64,
    pub points: Vec<RocPoint>,
}

/// Multi-class ROC rows with a leading `class` column.
pub fn class_rocs_to_csv(curves: &[ClassRoc]) -> String {
    let mut out = String::from("class,fpr,tpr,threshold\n");
    for c in curves {
        for p in &c.points {
            let _ = writeln!(out, "{},{},{},{}", c.class, p.fpr, p.tpr, p.threshold);
        }
    }
    out
}

/// Everything measured for one model on one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n_samples: u64,
    pub confusion: ConfusionMatrix,
    /// For two classes the positive class is 1 and these are its binary
    /// metrics; otherwise accuracy is `trace / N` and the rest are macro
    /// means.
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub error: f64,
    pub undefined: Vec<String>,
    pub per_class: Vec<ClassMetrics>,
    /// Mean AUC over the classes whose curve is defined; `None` if none is.
    pub auc: Option<f64>,
    /// For two classes, the single curve of class 1.
    pub roc: Vec<ClassRoc>,
    /// Classes with no positive or no negative sample, hence no curve.
    pub roc_skipped: Vec<u32>,
}

/// Scores `scores` (one row per sample, one column per class) against
/// `truth`. Predictions are the row-wise argmax.
pub fn evaluate(truth: &[u32], scores: &Matrix) -> Result<MetricsReport> {
    if truth.len() != scores.rows() {
        return Err(Error::Data(format!("{} labels but {} score rows", truth.len(), scores.rows())));
    }
    let k = scores.cols();
    let predicted: Vec<u32> = (0..scores.rows())
        .map(|i| crate::models::argmax(scores.row(i)) as u32)
        .collect();
    let cm = confusion(truth, &predicted, k)?;
    let mm = macro_metrics(&cm);

    let (accuracy, precision, recall, f1, error, undefined) = if k == 2 {
        let m = metrics(&cm, 1);
        (m.accuracy, m.precision, m.recall, m.f1, m.error, m.undefined)
    } else {
        let mut undefined = Vec::new();
        if cm.total() == 0 {
            undefined.push("accuracy".into());
        }
        (mm.accuracy, mm.macro_precision, mm.macro_recall, mm.macro_f1, mm.error, undefined)
    };

    let classes: Vec<usize> = if k == 2 { vec![1] } else { (0..k).collect() };
    let mut roc = Vec::new();
    let mut roc_skipped = Vec::new();
    for c in classes {
        let t: Vec<bool> = truth.iter().map(|&v| v as usize == c).collect();
        let s: Vec<f64> = (0..scores.rows()).map(|i| scores.get(i, c)).collect();
        match roc_curve(&t, &s) {
            Ok(points) => roc.push(ClassRoc {
                class: c as u32,
                auc: auc(&points),
                points,
            }),
            Err(_) => roc_skipped.push(c as u32),
        }
    }
    let auc = if roc.is_empty() {
        None
    } else {
        Some(roc.iter().map(|r| r.auc).sum::<f64>() / roc.len() as f64)
    };

    Ok(MetricsReport {
        n_samples: cm.total(),
        confusion: cm,
        accuracy,
        precision,
        recall,
        f1,
        error,
        undefined,
        per_class: mm.per_class,
        auc,
        roc,
        roc_skipped,
    })
}
