use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{Classifier, Learner};
use crate::data::Dataset;

use super::{ConfusionMatrix, EvalError, MetricsReport};

/// Assignment of instances to cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CVPlan {
    pub k: usize,
    pub seed: u64,
    pub stratified: bool,
    /// Instance indices per fold, each list ascending.
    pub folds: Vec<Vec<usize>>,
}

impl CVPlan {
    /// Checks that the folds partition `0..n`.
    pub fn validate(&self, n: usize) -> Result<(), EvalError> {
        if self.folds.len() != self.k {
            return Err(EvalError::InvalidPlan(format!("{} fold lists for k = {}", self.folds.len(), self.k)));
        }
        let mut seen = vec![false; n];
        for &i in self.folds.iter().flatten() {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(EvalError::InvalidPlan(format!("instance {i} is out of range or repeated")));
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(EvalError::InvalidPlan(format!("instance {i} is in no fold")));
        }
        Ok(())
    }

    /// Indices outside fold `i`, ascending.
    pub fn training_indices(&self, i: usize) -> Vec<usize> {
        let mut train: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        train.sort_unstable();
        train
    }
}

/// Stratified plan with `k` folds.
pub fn make_cv_plan(ds: &Dataset, k: usize, seed: u64) -> Result<CVPlan, EvalError> {
    make_cv_plan_with(ds, k, seed, true)
}

/// Shuffles the indices with `seed` and deals them round-robin into `k`
/// folds. When stratified, classes are dealt one after another in class
/// order and the dealing position carries over between classes.
pub fn make_cv_plan_with(ds: &Dataset, k: usize, seed: u64, stratified: bool) -> Result<CVPlan, EvalError> {
    let n = ds.len();
    if k < 2 {
        return Err(EvalError::InvalidFolds(k));
    }
    if n < k {
        return Err(EvalError::TooFewInstances { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut dealt = Vec::with_capacity(n);
    if stratified {
        let classes = (0..n)
            .map(|r| ds.class_of(r).ok_or(EvalError::MissingTarget(r + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        for c in 0..ds.schema().num_classes() {
            dealt.extend(order.iter().copied().filter(|&r| classes[r] == c));
        }
    } else {
        dealt = order;
    }

    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (pos, r) in dealt.into_iter().enumerate() {
        folds[pos % k].push(r);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(CVPlan {
        k,
        seed,
        stratified,
        folds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub row: usize,
    pub fold: usize,
    pub actual: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub pooled: ConfusionMatrix,
    pub per_fold: Vec<ConfusionMatrix>,
    pub report: MetricsReport,
    /// One entry per instance, ordered by row.
    pub predictions: Vec<Prediction>,
}

/// Trains on every fold but one and tests on the held-out fold, for each
/// fold in turn. The pooled matrix is the sum of the per-fold matrices.
/// Folds run in parallel; the result does not depend on the thread count.
pub fn cross_validate<L: Learner>(ds: &Dataset, learner: &L, plan: &CVPlan) -> Result<CvOutcome, EvalError> {
    if ds.schema().num_classes() != 2 {
        return Err(EvalError::NotBinary(ds.schema().num_classes()));
    }
    plan.validate(ds.len())?;
    let fold_results: Vec<Vec<Prediction>> = (0..plan.k)
        .into_par_iter()
        .map(|i| {
            let train = ds.select_rows(&plan.training_indices(i));
            let model = learner.fit(&train).map_err(|source| EvalError::Fold { fold: i + 1, source })?;
            plan.folds[i]
                .iter()
                .map(|&r| {
                    let actual = ds.class_of(r).ok_or(EvalError::MissingTarget(r + 1))?;
                    let predicted = model
                        .predict_class(ds.row(r))
                        .map_err(|source| EvalError::Fold { fold: i + 1, source })?
                        .0;
                    Ok(Prediction {
                        row: r,
                        fold: i + 1,
                        actual,
                        predicted,
                    })
                })
                .collect()
        })
        .collect::<Result<_, EvalError>>()?;

    let per_fold: Vec<ConfusionMatrix> = fold_results
        .iter()
        .map(|preds| ConfusionMatrix::from_pairs(preds.iter().map(|p| (p.actual, p.predicted))))
        .collect();
    let pooled: ConfusionMatrix = per_fold.iter().copied().sum();
    let mut predictions: Vec<Prediction> = fold_results.into_iter().flatten().collect();
    predictions.sort_by_key(|p| p.row);
    Ok(CvOutcome {
        report: MetricsReport::from_matrix(&pooled, 0.95),
        pooled,
        per_fold,
        predictions,
    })
}
