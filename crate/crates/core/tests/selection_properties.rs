mod common;

use heartml::data::Dataset;
use heartml::selection::{
    best_first_select, select_features, symmetric_uncertainty, BestFirstOptions, CfsConfig, CfsEvaluator,
    Discretization, DiscretizationMap, FeatureSubset, SubsetEvaluator,
};
use proptest::prelude::*;

use common::{nominal_ds, synthetic};

/// Nominal features (2 to 4 categories each) plus a binary class.
fn arb_nominal(max_features: usize) -> impl Strategy<Value = (Vec<usize>, Vec<Vec<usize>>)> {
    (prop::collection::vec(2usize..5, 1..=max_features), 4usize..40).prop_flat_map(|(mut cats, n)| {
        cats.push(2);
        let row: Vec<_> = cats.iter().map(|&k| 0..k).collect();
        (Just(cats), prop::collection::vec(row, n))
    })
}

fn toy((cats, rows): &(Vec<usize>, Vec<Vec<usize>>)) -> Dataset {
    nominal_ds(cats, rows)
}

fn all_subsets(features: &[usize]) -> Vec<FeatureSubset> {
    (1u32..1 << features.len())
        .map(|mask| {
            let mut s = FeatureSubset::empty();
            for (j, &f) in features.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    s = s.with(f);
                }
            }
            s
        })
        .collect()
}

proptest! {
    #[test]
    fn su_is_symmetric_and_bounded(data in arb_nominal(4)) {
        let ds = toy(&data);
        let dmap = DiscretizationMap::new();
        let m = ds.schema().len();
        for a in 0..m {
            for b in 0..m {
                let ab = symmetric_uncertainty(&ds, a, b, &dmap).unwrap();
                let ba = symmetric_uncertainty(&ds, b, a, &dmap).unwrap();
                prop_assert!((ab - ba).abs() <= 1e-12);
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&ab));
            }
        }
    }

    #[test]
    fn su_matches_oracle(data in arb_nominal(3)) {
        let ds = toy(&data);
        let columns: Vec<Vec<usize>> = (0..data.0.len()).map(|j| data.1.iter().map(|r| r[j]).collect()).collect();
        let ev = CfsEvaluator::new(&ds, &Discretization::Mdl);
        for a in 0..columns.len() {
            for b in 0..columns.len() {
                prop_assert!((ev.correlation(a, b) - common::su_oracle(&columns[a], &columns[b])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn restarting_from_the_result_never_loses_merit(data in arb_nominal(6)) {
        let ds = toy(&data);
        let ev = CfsEvaluator::new(&ds, &Discretization::Mdl);
        let first = best_first_select(&ev, &BestFirstOptions::default());
        let again = best_first_select(&ev, &BestFirstOptions { start: Some(first.subset.clone()), ..BestFirstOptions::default() });
        prop_assert!(again.merit.value() >= first.merit.value() - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_beats_most_subsets(data in arb_nominal(8)) {
        let ds = toy(&data);
        let ev = CfsEvaluator::new(&ds, &Discretization::Mdl);
        let found = best_first_select(&ev, &BestFirstOptions::default()).merit.value();
        let subsets = all_subsets(ev.features());
        let beaten = subsets.iter().filter(|s| ev.evaluate(s) <= found + 1e-12).count();
        prop_assert!(beaten as f64 >= 0.95 * subsets.len() as f64, "{} of {}", beaten, subsets.len());
    }
}

/// Adds a feature independent of the class but related to a member.
#[test]
fn class_independent_redundant_feature_lowers_merit() {
    let cases: [(Vec<usize>, Vec<Vec<usize>>); 2] = [
        (
            vec![2, 2, 2],
            vec![
                vec![0, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![1, 1, 1],
                vec![0, 0, 0],
                vec![0, 1, 0],
                vec![1, 0, 1],
                vec![1, 1, 1],
            ],
        ),
        (
            vec![3, 2, 2, 2],
            vec![
                vec![0, 0, 1, 0],
                vec![0, 1, 1, 0],
                vec![1, 0, 0, 0],
                vec![2, 1, 0, 0],
                vec![2, 0, 1, 1],
                vec![2, 1, 1, 1],
                vec![1, 0, 0, 1],
                vec![2, 1, 0, 1],
            ],
        ),
    ];
    for (cats, rows) in cases {
        let ds = nominal_ds(&cats, &rows);
        let ev = CfsEvaluator::new(&ds, &Discretization::Mdl);
        let extra = 1;
        assert!(ev.class_correlation(extra) == 0.0, "feature must be independent of the class");
        assert!(ev.correlation(0, extra) > 0.0, "feature must relate to a member");
        let base = FeatureSubset::new(&ds, [0]).unwrap();
        let grown = base.with(extra);
        assert!(ev.evaluate(&grown) < ev.evaluate(&base));
        if cats.len() == 4 {
            let wider = FeatureSubset::new(&ds, [0, 2]).unwrap();
            assert!(ev.evaluate(&wider.with(extra)) < ev.evaluate(&wider));
        }
    }
}

#[test]
fn selection_is_independent_of_thread_count() {
    let ds = synthetic();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| select_features(&ds, &CfsConfig::default()))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
    assert!(!one.attributes.is_empty());
}
