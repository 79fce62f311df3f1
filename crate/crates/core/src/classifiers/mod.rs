//! Naive Bayes, C4.5-style decision tree and random forest classifiers.

mod forest;
mod model_io;
mod naive_bayes;
mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{ClassLabel, Dataset, Schema, Value};

pub use self::forest::{default_k_per_split, rf_predict, rf_train, tree_seed, ForestParams, RandomForestModel};
pub use self::model_io::{ModelFile, MODEL_FORMAT, MODEL_VERSION};
pub use self::naive_bayes::{nb_predict, nb_train, NaiveBayesModel, NbParams};
pub use self::tree::{
    c45_predict, c45_train, evaluate_splits, DecisionTree, Node, SplitCandidate, SplitKind, TreeParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error("training data has no instances")]
    NoInstances,
    #[error("class `{0}` has no training instances")]
    EmptyClass(String),
    #[error("row {0} has a missing class value")]
    MissingTarget(usize),
    #[error("row does not match the model schema: {0}")]
    SchemaMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("model file: {0}")]
    ModelFormat(String),
}

/// Posterior class probabilities: non-negative, summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDistribution(Vec<f64>);

impl ClassDistribution {
    /// Normalizes non-negative weights. All-zero weights give a uniform
    /// distribution.
    pub fn from_weights(weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            Self(weights.into_iter().map(|w| w / total).collect())
        } else {
            let k = weights.len() as f64;
            Self(vec![1.0 / k; weights.len()])
        }
    }

    pub fn from_counts(counts: &[usize]) -> Self {
        Self::from_weights(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn one_hot(class: usize, num_classes: usize) -> Self {
        let mut p = vec![0.0; num_classes];
        p[class] = 1.0;
        Self(p)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn probability(&self, class: usize) -> f64 {
        self.0[class]
    }

    /// Most probable class; near-ties (within 1e-12) go to the lowest index.
    pub fn argmax(&self) -> ClassLabel {
        ClassLabel(argmax_lowest(&self.0))
    }
}

pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .position(|&v| v >= max - 1e-12)
        .expect("non-empty distribution")
}

pub(crate) fn argmax_counts(counts: &[usize]) -> usize {
    let max = counts.iter().copied().max().unwrap_or(0);
    counts.iter().position(|&c| c == max).unwrap_or(0)
}

/// A trained model.
pub trait Classifier {
    fn schema(&self) -> &Schema;

    fn predict(&self, row: &[Value]) -> Result<ClassDistribution, ClassifierError>;

    fn predict_class(&self, row: &[Value]) -> Result<ClassLabel, ClassifierError> {
        self.predict(row).map(|d| d.argmax())
    }
}

/// Something that trains a [`Classifier`] from a dataset.
pub trait Learner: Sync {
    type Model: Classifier + Send;

    fn fit(&self, ds: &Dataset) -> Result<Self::Model, ClassifierError>;
}

/// Checks a prediction row against the training schema. The target cell
/// is not inspected beyond its type.
pub(crate) fn check_row(schema: &Schema, row: &[Value]) -> Result<(), ClassifierError> {
    if row.len() != schema.len() {
        return Err(ClassifierError::SchemaMismatch(format!(
            "expected {} values, got {}",
            schema.len(),
            row.len()
        )));
    }
    for (v, attr) in row.iter().zip(schema.attributes()) {
        if !attr.accepts(v) {
            return Err(ClassifierError::SchemaMismatch(format!(
                "value {v:?} does not fit attribute `{}`",
                attr.name
            )));
        }
    }
    Ok(())
}

/// Class of every row, rejecting empty data and missing class values.
pub(crate) fn training_classes(ds: &Dataset) -> Result<Vec<usize>, ClassifierError> {
    if ds.is_empty() {
        return Err(ClassifierError::NoInstances);
    }
    (0..ds.len())
        .map(|r| ds.class_of(r).ok_or(ClassifierError::MissingTarget(r + 1)))
        .collect()
}

/// Classifier choice plus hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", rename_all = "snake_case")]
pub enum ClassifierSpec {
    NaiveBayes(NbParams),
    J48(TreeParams),
    RandomForest(ForestParams),
}

impl ClassifierSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NaiveBayes(_) => "NaiveBayes",
            Self::J48(_) => "J48",
            Self::RandomForest(_) => "RandomForest",
        }
    }

    /// Short lowercase identifier used on the command line and in file names.
    pub fn key(&self) -> &'static str {
        match self {
            Self::NaiveBayes(_) => "nb",
            Self::J48(_) => "j48",
            Self::RandomForest(_) => "rf",
        }
    }
}

impl Learner for ClassifierSpec {
    type Model = TrainedModel;

    fn fit(&self, ds: &Dataset) -> Result<TrainedModel, ClassifierError> {
        Ok(match self {
            Self::NaiveBayes(p) => TrainedModel::NaiveBayes(nb_train(ds, p)?),
            Self::J48(p) => TrainedModel::DecisionTree(c45_train(ds, p)?),
            Self::RandomForest(p) => TrainedModel::RandomForest(rf_train(ds, p)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TrainedModel {
    NaiveBayes(NaiveBayesModel),
    DecisionTree(DecisionTree),
    RandomForest(RandomForestModel),
}

impl Classifier for TrainedModel {
    fn schema(&self) -> &Schema {
        match self {
            Self::NaiveBayes(m) => m.schema(),
            Self::DecisionTree(m) => m.schema(),
            Self::RandomForest(m) => m.schema(),
        }
    }

    fn predict(&self, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
        match self {
            Self::NaiveBayes(m) => m.predict(row),
            Self::DecisionTree(m) => m.predict(row),
            Self::RandomForest(m) => m.predict(row),
        }
    }
}
