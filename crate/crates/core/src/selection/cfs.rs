use std::sync::OnceLock;

use crate::data::Dataset;

use super::uncertainty::su_from_codes;
use super::{Discretization, DiscretizationMap, FeatureSubset, MeritScore, SelectionError, SubsetEvaluator};

/// Merit of a subset from its feature-class correlations and the
/// correlations of every unordered feature pair.
pub fn merit_from_correlations(class_corr: &[f64], pair_corr: &[f64]) -> f64 {
    let k = class_corr.len() as f64;
    if class_corr.is_empty() {
        return 0.0;
    }
    let numerator: f64 = class_corr.iter().sum();
    let denominator = (k + 2.0 * pair_corr.iter().sum::<f64>()).sqrt();
    numerator / denominator
}

/// CFS subset evaluator over one dataset.
///
/// Symmetric uncertainties are memoized per unordered attribute pair. The
/// memo is safe to share between threads; each entry is computed once.
#[derive(Debug)]
pub struct CfsEvaluator {
    codes: Vec<(Vec<Option<usize>>, usize)>,
    target: usize,
    features: Vec<usize>,
    cache: Vec<OnceLock<f64>>,
}

impl CfsEvaluator {
    pub fn new(ds: &Dataset, discretization: &Discretization) -> Self {
        Self::with_map(ds, &DiscretizationMap::build(ds, discretization)).expect("map covers every numeric feature")
    }

    pub fn with_map(ds: &Dataset, dmap: &DiscretizationMap) -> Result<Self, SelectionError> {
        let n = ds.schema().len();
        let codes = (0..n).map(|a| dmap.codes(ds, a)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            codes,
            target: ds.schema().target_index(),
            features: ds.schema().feature_indices(),
            cache: (0..n * (n + 1) / 2).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Cached symmetric uncertainty between two attributes.
    pub fn correlation(&self, a: usize, b: usize) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let slot = hi * (hi + 1) / 2 + lo;
        *self.cache[slot].get_or_init(|| {
            let (ca, ka) = &self.codes[lo];
            let (cb, kb) = &self.codes[hi];
            su_from_codes((ca, *ka), (cb, *kb))
        })
    }

    pub fn class_correlation(&self, attr: usize) -> f64 {
        self.correlation(attr, self.target)
    }

    pub fn merit(&self, subset: &FeatureSubset) -> Result<MeritScore, SelectionError> {
        cfs_merit(self, subset)
    }
}

/// Merit of a non-empty subset.
pub fn cfs_merit(evaluator: &CfsEvaluator, subset: &FeatureSubset) -> Result<MeritScore, SelectionError> {
    if subset.is_empty() {
        return Err(SelectionError::EmptySubset);
    }
    let members = subset.members();
    let class_corr: Vec<f64> = members.iter().map(|&f| evaluator.class_correlation(f)).collect();
    let mut pair_corr = Vec::with_capacity(members.len() * members.len().saturating_sub(1) / 2);
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            pair_corr.push(evaluator.correlation(a, b));
        }
    }
    Ok(MeritScore(merit_from_correlations(&class_corr, &pair_corr)))
}

impl SubsetEvaluator for CfsEvaluator {
    fn features(&self) -> &[usize] {
        &self.features
    }

    fn evaluate(&self, subset: &FeatureSubset) -> f64 {
        cfs_merit(self, subset).map_or(0.0, MeritScore::value)
    }
}
