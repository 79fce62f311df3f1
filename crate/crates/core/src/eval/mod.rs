//! Cross-validation, confusion matrices, metrics and reports.

mod cv;
mod metrics;
mod report;

use thiserror::Error;

use crate::classifiers::ClassifierError;

pub use self::cv::{cross_validate, make_cv_plan, make_cv_plan_with, CVPlan, CvOutcome, Prediction};
pub use self::metrics::{
    accuracy, exact_binomial_ci, format_percent, format_ratio_percent, misclassification_rate, sensitivity,
    specificity, ConfusionMatrix, MetricsReport, RateEstimate,
};
pub use self::report::{
    summary_csv, summary_text, CellReport, CvInfo, DatasetInfo, FeatureSetInfo, CSV_HEADER, REPORT_VERSION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("no positive instances")]
    NoPositives,
    #[error("no negative instances")]
    NoNegatives,
    #[error("invalid count: {successes} successes out of {n}")]
    InvalidCount { successes: usize, n: usize },
    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("cannot make {k} folds from {n} instances")]
    TooFewInstances { n: usize, k: usize },
    #[error("need at least 2 folds, got {0}")]
    InvalidFolds(usize),
    #[error("row {0} has a missing class value")]
    MissingTarget(usize),
    #[error("cross-validation needs a two-class target, found {0} classes")]
    NotBinary(usize),
    #[error("invalid fold plan: {0}")]
    InvalidPlan(String),
    #[error("fold {fold}: {source}")]
    Fold { fold: usize, source: ClassifierError },
}
