//! Helpers shared by the integration tests: dataset builders, proptest
//! strategies and brute-force oracles written without the library's code.
#![allow(dead_code)]

use heartml::data::{parse_arff, AttributeSpec, Dataset, Schema, Value};
use proptest::prelude::*;

pub const SYNTHETIC: &str = include_str!("../../examples/data/heart_synthetic_529.arff");

pub fn synthetic() -> Dataset {
    parse_arff(SYNTHETIC).expect("bundled dataset parses")
}

/// All-nominal dataset. `cats[j]` is the number of categories of column
/// `j`; the last column is the class. Labels are `"0"`, `"1"`, ...
pub fn nominal_ds(cats: &[usize], rows: &[Vec<usize>]) -> Dataset {
    let last = cats.len() - 1;
    let attrs = cats
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let labels: Vec<String> = (0..k).map(|c| c.to_string()).collect();
            if j == last {
                AttributeSpec::nominal("class", labels).as_target()
            } else {
                AttributeSpec::nominal(format!("f{j}"), labels)
            }
        })
        .collect();
    let schema = Schema::new(attrs).unwrap();
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|&v| Value::Nominal(v)).collect())
        .collect();
    Dataset::new("toy", schema, rows).unwrap()
}

/// Single numeric feature `x` and a binary class.
pub fn numeric_ds(points: &[(f64, usize)]) -> Dataset {
    let schema = Schema::new(vec![
        AttributeSpec::numeric("x"),
        AttributeSpec::nominal("class", ["0", "1"]).as_target(),
    ])
    .unwrap();
    let rows = points
        .iter()
        .map(|&(x, c)| vec![Value::Numeric(x), Value::Nominal(c)])
        .collect();
    Dataset::new("num", schema, rows).unwrap()
}

fn entropy_bits(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// Symmetric uncertainty of two fully observed nominal columns.
pub fn su_oracle(a: &[usize], b: &[usize]) -> f64 {
    let ka = a.iter().max().map_or(1, |m| m + 1);
    let kb = b.iter().max().map_or(1, |m| m + 1);
    let mut ca = vec![0; ka];
    let mut cb = vec![0; kb];
    let mut joint = vec![0; ka * kb];
    for (&x, &y) in a.iter().zip(b) {
        ca[x] += 1;
        cb[y] += 1;
        joint[x * kb + y] += 1;
    }
    let (ha, hb) = (entropy_bits(&ca), entropy_bits(&cb));
    if ha + hb == 0.0 {
        return 0.0;
    }
    2.0 * (ha + hb - entropy_bits(&joint)) / (ha + hb)
}

/// Hall's merit `k * mean(r_cf) / sqrt(k + k(k-1) * mean(r_ff))` for the
/// columns listed in `subset`; the class is the last column.
pub fn merit_oracle(columns: &[Vec<usize>], subset: &[usize]) -> f64 {
    let k = subset.len();
    if k == 0 {
        return 0.0;
    }
    let class = columns.last().unwrap();
    let rcf = subset.iter().map(|&f| su_oracle(&columns[f], class)).sum::<f64>() / k as f64;
    let mut pairs = Vec::new();
    for (i, &f) in subset.iter().enumerate() {
        for &g in &subset[i + 1..] {
            pairs.push(su_oracle(&columns[f], &columns[g]));
        }
    }
    let rff = if pairs.is_empty() {
        0.0
    } else {
        pairs.iter().sum::<f64>() / pairs.len() as f64
    };
    let kf = k as f64;
    kf * rcf / (kf + kf * (kf - 1.0) * rff).sqrt()
}

/// Best merit over every non-empty subset of the feature columns.
pub fn exhaustive_best_merit(columns: &[Vec<usize>]) -> f64 {
    let m = columns.len() - 1;
    (1u32..1 << m)
        .map(|mask| {
            let subset: Vec<usize> = (0..m).filter(|j| mask & (1 << j) != 0).collect();
            merit_oracle(columns, &subset)
        })
        .fold(0.0, f64::max)
}

/// Exact naive Bayes argmax over binary features and classes with Laplace
/// smoothing and unsmoothed priors. Scores are compared as fractions, and
/// exact ties go to class 0. `None` when a class has no rows.
pub fn nb_oracle_argmax(rows: &[[usize; 3]], query: [usize; 2]) -> Option<usize> {
    let mut score = [(0u128, 1u128); 2];
    for (c, slot) in score.iter_mut().enumerate() {
        let nc = rows.iter().filter(|r| r[2] == c).count() as u128;
        if nc == 0 {
            return None;
        }
        let mut num = nc;
        let mut den = rows.len() as u128;
        for (j, &q) in query.iter().enumerate() {
            let hits = rows.iter().filter(|r| r[2] == c && r[j] == q).count() as u128;
            num *= hits + 1;
            den *= nc + 2;
        }
        *slot = (num, den);
    }
    let (a, b) = (score[0].0 * score[1].1, score[1].0 * score[0].1);
    Some(usize::from(b > a))
}

/// Every multiset of `n` rows drawn from the 8 possible binary rows.
pub fn binary_multisets(n: usize) -> Vec<Vec<[usize; 3]>> {
    fn rec(start: usize, left: usize, cur: &mut Vec<[usize; 3]>, out: &mut Vec<Vec<[usize; 3]>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for code in start..8 {
            cur.push([code & 1, (code >> 1) & 1, (code >> 2) & 1]);
            rec(code, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

fn label() -> impl Strategy<Value = String> {
    "[ -~]{1,8}"
}

fn cell(kind: &Option<Vec<String>>) -> BoxedStrategy<Value> {
    match kind {
        None => prop_oneof![
            1 => Just(Value::Missing),
            6 => prop::num::f64::NORMAL.prop_map(Value::Numeric),
            1 => prop::num::f64::SUBNORMAL.prop_map(Value::Numeric),
            2 => (-1000i32..1000).prop_map(|i| Value::Numeric(f64::from(i) / 8.0)),
        ]
        .boxed(),
        Some(labels) => prop_oneof![
            1 => Just(Value::Missing),
            5 => (0..labels.len()).prop_map(Value::Nominal),
        ]
        .boxed(),
    }
}

/// Arbitrary ARFF-representable dataset: printable names and labels,
/// mixed attribute kinds, missing cells anywhere. The target is nominal
/// and placed at a random position.
pub fn arb_dataset() -> impl Strategy<Value = Dataset> {
    let names = prop::collection::hash_set(label(), 2..6).prop_map(|s| s.into_iter().collect::<Vec<_>>());
    let kinds = prop::collection::vec(
        prop_oneof![Just(None), prop::collection::hash_set(label(), 1..5).prop_map(|s| Some(s.into_iter().collect()))],
        6,
    );
    (names, kinds, label(), any::<prop::sample::Index>(), 0usize..12)
        .prop_flat_map(|(names, mut kinds, relation, target_pick, n_rows)| {
            kinds.truncate(names.len());
            let target = target_pick.index(names.len());
            if kinds[target].is_none() {
                kinds[target] = Some(vec!["no".to_string(), "yes".to_string()]);
            }
            let row = kinds.iter().map(cell).collect::<Vec<_>>();
            let rows = prop::collection::vec(row, n_rows);
            (Just(names), Just(kinds), Just(relation), Just(target), rows)
        })
        .prop_map(|(names, kinds, relation, target, rows)| {
            let attrs = names
                .into_iter()
                .zip(kinds)
                .enumerate()
                .map(|(j, (name, kind))| {
                    let spec = match kind {
                        None => AttributeSpec::numeric(name),
                        Some(labels) => AttributeSpec::nominal(name, labels),
                    };
                    if j == target {
                        spec.as_target()
                    } else {
                        spec
                    }
                })
                .collect();
            Dataset::new(relation, Schema::new(attrs).unwrap(), rows).unwrap()
        })
}

/// Small trainable dataset: two numeric and one nominal feature, a binary
/// class with both labels present, occasional missing feature values.
pub fn arb_training_set() -> impl Strategy<Value = Dataset> {
    let row = (
        prop_oneof![1 => Just(None), 5 => (-50i32..50).prop_map(Some)],
        prop_oneof![1 => Just(None), 5 => (-1.0e3..1.0e3f64).prop_map(Some)],
        prop_oneof![1 => Just(None), 5 => (0usize..3).prop_map(Some)],
        0usize..2,
    );
    prop::collection::vec(row, 4..30).prop_map(|mut rows| {
        rows[0].3 = 0;
        rows[1].3 = 1;
        let schema = Schema::new(vec![
            AttributeSpec::numeric("a"),
            AttributeSpec::numeric("b"),
            AttributeSpec::nominal("c", ["r", "g", "b"]),
            AttributeSpec::nominal("class", ["0", "1"]).as_target(),
        ])
        .unwrap();
        let rows = rows
            .into_iter()
            .map(|(a, b, c, y)| {
                vec![
                    a.map_or(Value::Missing, |v| Value::Numeric(f64::from(v))),
                    b.map_or(Value::Missing, Value::Numeric),
                    c.map_or(Value::Missing, Value::Nominal),
                    Value::Nominal(y),
                ]
            })
            .collect();
        Dataset::new("train", schema, rows).unwrap()
    })
}
