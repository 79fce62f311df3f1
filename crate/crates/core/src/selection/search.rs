use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;

use super::{FeatureSubset, MeritScore};

/// Scores feature subsets. Implementations must be deterministic.
pub trait SubsetEvaluator: Sync {
    /// Candidate feature indices, ascending.
    fn features(&self) -> &[usize];
    /// Merit of a subset; the empty subset scores 0.
    fn evaluate(&self, subset: &FeatureSubset) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestFirstOptions {
    /// Consecutive non-improving expansions before the search stops.
    pub max_stale: usize,
    /// Starting subset; the empty set when `None`.
    pub start: Option<FeatureSubset>,
}

impl Default for BestFirstOptions {
    fn default() -> Self {
        Self {
            max_stale: 5,
            start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub subset: FeatureSubset,
    pub merit: MeritScore,
    /// Number of distinct subsets scored.
    pub evaluated: usize,
}

struct Node {
    subset: FeatureSubset,
    merit: f64,
}

/// Higher merit first; equal merits prefer the lexicographically smaller
/// index sequence.
fn priority(a: &Node, b: &Node) -> Ordering {
    b.merit.total_cmp(&a.merit).then_with(|| a.subset.cmp(&b.subset))
}

/// Forward best-first search over feature subsets.
///
/// Each step expands the best open subset by every single feature it does
/// not contain. The search ends once `max_stale` consecutive expansions
/// fail to improve on the best merit seen, or the open list empties.
/// Children of one expansion are scored in parallel; the outcome does not
/// depend on the number of worker threads.
pub fn best_first_select<E: SubsetEvaluator>(evaluator: &E, options: &BestFirstOptions) -> SearchResult {
    let start = options.start.clone().unwrap_or_default();
    let start_merit = evaluator.evaluate(&start);
    let mut best = Node {
        subset: start.clone(),
        merit: start_merit,
    };
    let mut visited: HashSet<FeatureSubset> = HashSet::from([start.clone()]);
    let mut open = vec![Node {
        subset: start,
        merit: start_merit,
    }];
    let mut stale = 0;

    while stale < options.max_stale {
        let Some(head_pos) = (0..open.len()).min_by(|&i, &j| priority(&open[i], &open[j])) else {
            break;
        };
        let head = open.swap_remove(head_pos);

        let children: Vec<FeatureSubset> = evaluator
            .features()
            .iter()
            .filter(|&&f| !head.subset.contains(f))
            .map(|&f| head.subset.with(f))
            .filter(|child| visited.insert(child.clone()))
            .collect();
        let merits: Vec<f64> = children.par_iter().map(|c| evaluator.evaluate(c)).collect();

        let mut improved = false;
        for (subset, merit) in children.into_iter().zip(merits) {
            if merit > best.merit {
                best = Node {
                    subset: subset.clone(),
                    merit,
                };
                improved = true;
            }
            open.push(Node { subset, merit });
        }
        stale = if improved { 0 } else { stale + 1 };
    }

    SearchResult {
        subset: best.subset,
        merit: MeritScore(best.merit),
        evaluated: visited.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Additive toy evaluator: merit is the sum of per-feature weights.
    struct Additive(Vec<usize>, Vec<f64>);

    impl SubsetEvaluator for Additive {
        fn features(&self) -> &[usize] {
            &self.0
        }
        fn evaluate(&self, s: &FeatureSubset) -> f64 {
            s.members().iter().map(|&f| self.1[f]).sum()
        }
    }

    #[test]
    fn picks_all_positive_weights() {
        let e = Additive(vec![0, 1, 2, 3], vec![0.5, -0.1, 0.2, -0.3]);
        let r = best_first_select(&e, &BestFirstOptions::default());
        assert_eq!(r.subset.members(), &[0, 2]);
        assert!((r.merit.value() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn single_feature_cases() {
        let pos = Additive(vec![0], vec![0.4]);
        assert_eq!(best_first_select(&pos, &BestFirstOptions::default()).subset.members(), &[0]);
        let zero = Additive(vec![0], vec![0.0]);
        assert!(best_first_select(&zero, &BestFirstOptions::default()).subset.is_empty());
        let none = Additive(vec![], vec![]);
        assert!(best_first_select(&none, &BestFirstOptions::default()).subset.is_empty());
    }

    #[test]
    fn forced_start_never_worse() {
        let e = Additive(vec![0, 1, 2], vec![0.5, -0.1, 0.2]);
        let start = FeatureSubset::from_sorted(vec![1]);
        let r = best_first_select(
            &e,
            &BestFirstOptions {
                max_stale: 5,
                start: Some(start.clone()),
            },
        );
        assert!(r.merit.value() >= e.evaluate(&start));
    }

    #[test]
    fn zero_stale_budget_returns_start() {
        let e = Additive(vec![0, 1], vec![0.5, 0.5]);
        let r = best_first_select(
            &e,
            &BestFirstOptions {
                max_stale: 0,
                start: None,
            },
        );
        assert!(r.subset.is_empty());
        assert_eq!(r.evaluated, 1);
    }
}
