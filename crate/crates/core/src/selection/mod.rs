//! Correlation-based feature subset selection.
//!
//! Numeric attributes are discretized against the class (recursive
//! minimum-entropy cuts with an MDL stopping rule), attribute correlation
//! is measured by symmetric uncertainty, and subsets are scored with
//!
//! ```text
//! merit(S) = k * mean(r_cf) / sqrt(k + k(k-1) * mean(r_ff))
//! ```
//!
//! where `r_cf` is feature-class correlation and `r_ff` feature-feature
//! correlation over the `k` members of `S`. A forward best-first search
//! looks for the highest-merit subset.

mod cfs;
mod discretize;
mod search;
mod uncertainty;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::Dataset;

pub use self::cfs::{cfs_merit, merit_from_correlations, CfsEvaluator};
pub use self::discretize::{discretize_equal_frequency, discretize_mdl, Discretization, DiscretizationMap, MdlMode};
pub(crate) use self::discretize::is_boundary;
pub use self::search::{best_first_select, BestFirstOptions, SearchResult, SubsetEvaluator};
pub use self::uncertainty::symmetric_uncertainty;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectionError {
    #[error("attribute {0} is not numeric")]
    NotNumeric(usize),
    #[error("numeric attribute {0} has no discretization")]
    NotDiscretized(usize),
    #[error("merit of an empty subset is undefined")]
    EmptySubset,
    #[error("attribute index {0} is not a feature of this schema")]
    NotAFeature(usize),
}

/// Sorted, duplicate-free set of feature (non-target) attribute indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FeatureSubset(Vec<usize>);

impl FeatureSubset {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Validates membership against the dataset's schema.
    pub fn new(ds: &Dataset, members: impl IntoIterator<Item = usize>) -> Result<Self, SelectionError> {
        let target = ds.schema().target_index();
        let n = ds.schema().len();
        let mut v: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = v.iter().find(|&&i| i == target || i >= n) {
            return Err(SelectionError::NotAFeature(bad));
        }
        v.sort_unstable();
        v.dedup();
        Ok(Self(v))
    }

    #[cfg(test)]
    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Self(v)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, attr: usize) -> bool {
        self.0.binary_search(&attr).is_ok()
    }

    pub fn with(&self, attr: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&attr) {
            v.insert(pos, attr);
        }
        Self(v)
    }

    pub fn names<'a>(&self, ds: &'a Dataset) -> Vec<&'a str> {
        self.0.iter().map(|&i| ds.schema().attribute(i).name.as_str()).collect()
    }
}

/// Subset merit; 0 for the empty subset.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct MeritScore(pub f64);

impl MeritScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for MeritScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.0)
    }
}

/// Options for [`select_features`].
#[derive(Debug, Clone, PartialEq)]
pub struct CfsConfig {
    pub discretization: Discretization,
    pub max_stale: usize,
}

impl Default for CfsConfig {
    fn default() -> Self {
        Self {
            discretization: Discretization::Mdl,
            max_stale: 5,
        }
    }
}

/// Result of a complete CFS + best-first run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Selected attribute names in schema order.
    pub attributes: Vec<String>,
    pub merit: f64,
    #[serde(skip)]
    pub subset: FeatureSubset,
}

/// Discretizes, builds the correlation cache and runs best-first search.
pub fn select_features(ds: &Dataset, config: &CfsConfig) -> Selection {
    let evaluator = CfsEvaluator::new(ds, &config.discretization);
    let result = best_first_select(
        &evaluator,
        &BestFirstOptions {
            max_stale: config.max_stale,
            start: None,
        },
    );
    Selection {
        attributes: result.subset.names(ds).into_iter().map(str::to_owned).collect(),
        merit: result.merit.value(),
        subset: result.subset,
    }
}
