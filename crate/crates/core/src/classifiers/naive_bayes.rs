use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Schema, Value};

use super::{check_row, training_classes, ClassDistribution, Classifier, ClassifierError, Learner};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NbParams {
    /// Added to every category count (1.0 is Laplace smoothing).
    pub smoothing: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        Self { smoothing: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum FeatureModel {
    /// `counts[class][category]` and per-class totals of known values.
    Nominal {
        counts: Vec<Vec<usize>>,
        totals: Vec<usize>,
    },
    Numeric {
        mean: Vec<f64>,
        stddev: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    schema: Schema,
    smoothing: f64,
    priors: Vec<f64>,
    /// `(attribute index, model)` for every feature.
    features: Vec<(usize, FeatureModel)>,
}

impl NaiveBayesModel {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    /// Smoothed `P(attr = category | class)` for a nominal feature.
    pub fn category_probability(&self, attr: usize, class: usize, category: usize) -> Option<f64> {
        match self.feature(attr)? {
            FeatureModel::Nominal { counts, totals } => {
                let k = counts[class].len() as f64;
                Some((counts[class][category] as f64 + self.smoothing) / (totals[class] as f64 + self.smoothing * k))
            }
            FeatureModel::Numeric { .. } => None,
        }
    }

    /// Per-class `(mean, stddev)` of a numeric feature.
    pub fn gaussian(&self, attr: usize, class: usize) -> Option<(f64, f64)> {
        match self.feature(attr)? {
            FeatureModel::Numeric { mean, stddev } => Some((mean[class], stddev[class])),
            FeatureModel::Nominal { .. } => None,
        }
    }

    fn feature(&self, attr: usize) -> Option<&FeatureModel> {
        self.features.iter().find(|(a, _)| *a == attr).map(|(_, m)| m)
    }
}

fn sample_stddev(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Some((mean, 0.0));
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Some((mean, (ss / (n - 1.0)).sqrt()))
}

pub fn nb_train(ds: &Dataset, params: &NbParams) -> Result<NaiveBayesModel, ClassifierError> {
    if !(params.smoothing.is_finite() && params.smoothing > 0.0) {
        return Err(ClassifierError::InvalidParameter(format!(
            "smoothing must be positive, got {}",
            params.smoothing
        )));
    }
    let classes = training_classes(ds)?;
    let schema = ds.schema();
    let k = schema.num_classes();
    let mut class_n = vec![0usize; k];
    for &c in &classes {
        class_n[c] += 1;
    }
    if let Some(empty) = class_n.iter().position(|&n| n == 0) {
        return Err(ClassifierError::EmptyClass(schema.class_labels()[empty].clone()));
    }
    let n = classes.len() as f64;
    let priors = class_n.iter().map(|&c| c as f64 / n).collect();

    let mut features = Vec::new();
    for attr in schema.feature_indices() {
        let model = match schema.attribute(attr).categories() {
            Some(cats) => {
                let mut counts = vec![vec![0usize; cats.len()]; k];
                let mut totals = vec![0usize; k];
                for (r, &c) in classes.iter().enumerate() {
                    if let Value::Nominal(v) = ds.value(r, attr) {
                        counts[c][v] += 1;
                        totals[c] += 1;
                    }
                }
                FeatureModel::Nominal { counts, totals }
            }
            None => {
                let mut per_class = vec![Vec::new(); k];
                for (r, &c) in classes.iter().enumerate() {
                    if let Value::Numeric(x) = ds.value(r, attr) {
                        per_class[c].push(x);
                    }
                }
                let all: Vec<f64> = per_class.iter().flatten().copied().collect();
                let (lo, hi) = all
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                let range = if all.is_empty() { 0.0 } else { hi - lo };
                let floor = if range > 0.0 { 1e-3 * range } else { 1e-3 };
                let (global_mean, global_sd) = sample_stddev(&all).unwrap_or((0.0, 0.0));
                let mut mean = Vec::with_capacity(k);
                let mut stddev = Vec::with_capacity(k);
                for values in &per_class {
                    let (m, s) = sample_stddev(values).unwrap_or((global_mean, global_sd));
                    mean.push(m);
                    stddev.push(s.max(floor));
                }
                FeatureModel::Numeric { mean, stddev }
            }
        };
        features.push((attr, model));
    }

    Ok(NaiveBayesModel {
        schema: schema.clone(),
        smoothing: params.smoothing,
        priors,
        features,
    })
}

fn gaussian_ln_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - 0.5 * (2.0 * PI).ln()
}

pub fn nb_predict(m: &NaiveBayesModel, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
    check_row(&m.schema, row)?;
    let mut log_post: Vec<f64> = m.priors.iter().map(|p| p.ln()).collect();
    for (attr, model) in &m.features {
        match (model, row[*attr]) {
            (FeatureModel::Nominal { counts, totals }, Value::Nominal(v)) => {
                for (c, lp) in log_post.iter_mut().enumerate() {
                    let kcat = counts[c].len() as f64;
                    let p = (counts[c][v] as f64 + m.smoothing) / (totals[c] as f64 + m.smoothing * kcat);
                    *lp += p.ln();
                }
            }
            (FeatureModel::Numeric { mean, stddev }, Value::Numeric(x)) => {
                for (c, lp) in log_post.iter_mut().enumerate() {
                    *lp += gaussian_ln_pdf(x, mean[c], stddev[c]);
                }
            }
            _ => {}
        }
    }
    let max = log_post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ClassDistribution::from_weights(
        log_post.iter().map(|lp| (lp - max).exp()).collect(),
    ))
}

impl Classifier for NaiveBayesModel {
    fn schema(&self) -> &Schema {
        &self.schema
    }

    fn predict(&self, row: &[Value]) -> Result<ClassDistribution, ClassifierError> {
        nb_predict(self, row)
    }
}

impl Learner for NbParams {
    type Model = NaiveBayesModel;

    fn fit(&self, ds: &Dataset) -> Result<NaiveBayesModel, ClassifierError> {
        nb_train(ds, self)
    }
}
