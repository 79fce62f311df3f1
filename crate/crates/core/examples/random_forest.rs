//! Random forest: vote shares, per-tree seeds, and the effect of one tree.
//!
//!     cargo run --example random_forest -- [TREES] [SEED]

use heartml::classifiers::{default_k_per_split, rf_predict, rf_train, tree_seed, ForestParams};
use heartml::data::parse_arff;

const TRAIN: &str = include_str!("data/heart_synthetic_529.arff");
const PATIENTS: &str = include_str!("data/heart_fixture.arff");

fn main() {
    let mut args = std::env::args().skip(1);
    let trees: usize = args.next().map_or(100, |s| s.parse().expect("TREES is a number"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("SEED is a number"));

    let ds = parse_arff(TRAIN).unwrap();
    let m = ds.schema().feature_indices().len();
    println!("{m} features, {} tried per split by default", default_k_per_split(m));

    let params = ForestParams { trees, seed, ..ForestParams::default() };
    let forest = rf_train(&ds, &params).unwrap();
    println!("first tree seeds: {:?}", (0..3).map(|i| tree_seed(seed, i)).collect::<Vec<_>>());
    let sizes: Vec<usize> = forest.trees().iter().map(|t| t.tree.num_nodes()).collect();
    println!("nodes per tree: min {} max {}", sizes.iter().min().unwrap(), sizes.iter().max().unwrap());

    let patients = parse_arff(PATIENTS).unwrap();
    for (i, row) in patients.rows().iter().enumerate() {
        let votes = forest.votes(row).unwrap();
        let share = rf_predict(&forest, row).unwrap();
        println!("patient {}: votes {votes:?}, share for 1 {:.2}", i + 1, share.probability(1));
    }

    if trees > 1 {
        let fewer = forest.without_tree(0);
        let row = patients.row(0);
        println!("without tree 0: {:?} -> {:?}", forest.votes(row).unwrap(), fewer.votes(row).unwrap());
    }

    let again = rf_train(&ds, &params).unwrap();
    assert_eq!(forest, again, "same seed, same forest");
}
