//! Fuzzy-membership feature ranking and from-scratch classifiers for
//! intrusion-detection experiments.
//!
//! The crate covers the whole experimental loop:
//!
//! - [`dataset`]: schema-driven CSV ingestion, label encoding and seeded
//!   stratified splits.
//! - [`preprocess`]: min-max scaling and ordinal encoding of categorical
//!   columns, fitted on the training partition only.
//! - [`fuzzy_select`]: triangular membership scoring, feature ranking and
//!   named feature vectors.
//! - [`models`]: decision tree, random forest, extra-trees, gradient-boosted
//!   trees, naive Bayes and a linear SVM behind one fit/score/predict contract.
//! - [`evaluate`]: confusion matrices, precision/recall/F1/error, ROC and AUC.
//! - [`pipeline`]: config-driven orchestration of all of the above.
//!
//! ```
//! use fuzzids::fuzzy_select::{triangular_membership, TriangularParams};
//!
//! let p = TriangularParams::new(0.0, 0.5, 1.0).unwrap();
//! assert_eq!(triangular_membership(0.25, &p), 0.5);
//! ```

pub mod dataset;
pub mod error;
pub mod evaluate;
pub mod fuzzy_select;
pub mod matrix;
pub mod models;
pub mod pipeline;
pub mod preprocess;
mod rng;
pub mod synthetic;

pub use error::{Error, Result};
pub use matrix::Matrix;

/// Version string recorded in run provenance blocks.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// The guide under `book/` is compiled as doc-tests so its snippets cannot
// drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/scaling.md")]
    mod scaling {}
    #[doc = include_str!("../../../book/src/fuzzy_selection.md")]
    mod fuzzy_selection {}
    #[doc = include_str!("../../../book/src/classifiers.md")]
    mod classifiers {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/pipeline.md")]
    mod pipeline {}
}
