//! Semi-supervised outlier detection for mixed numerical/nominal tables.
//!
//! A handful of labeled objects decide how much each attribute is trusted
//! (its classification accuracy under fuzzy rough approximations); the
//! unlabeled objects are scored by how much the fuzzy information entropy of
//! each attribute drops when they are left out.
//!
//! ```
//! use frod::{detect_table, golden::worked_example_table, FrodConfig};
//!
//! let table = worked_example_table();
//! let result = detect_table(&table, &FrodConfig::new(1.0, 1.0).with_threshold(0.6)).unwrap();
//! assert_eq!(result.outliers(), vec![5]);
//! ```

pub mod dataset;
pub mod detector;
pub mod entropy;
pub mod error;
pub mod eval;
pub mod fuzzy_relation;
pub mod golden;
pub mod output;
pub mod parallel;
pub mod rough_core;
pub mod supervision;
pub mod synthetic;

#[cfg(feature = "cli")]
pub mod cli;

pub use dataset::{
    load_csv, read_csv, stratified_split, Attribute, AttributeKind, CsvOptions, LabelAliases,
    LabelState, MixedTable, Schema, Split,
};
pub use detector::{
    adaptive_threshold, detect, detect_table, outlier_degree, outlier_factor, DetectionResult,
    FittedDetector, FrodConfig, LabeledScoring,
};
pub use entropy::{fuzzy_entropy, fuzzy_relative_entropy, leave_one_out_entropy, EntropyState};
pub use error::{FrodError, Result};
pub use eval::{
    auc, average_precision, run_experiment, threshold_margin, ExperimentConfig, ExperimentReport,
    Grid, TieBreak,
};
pub use fuzzy_relation::{fuzzy_radius, relation_for_attribute, relation_for_set, FuzzyRelation};
pub use rough_core::{
    approximation_accuracy, decision_faa, lower_approximation, similarity_class,
    upper_approximation, FuzzySet,
};
pub use supervision::{attribute_classification_accuracy, class_indicators, AttributeWeight};
