//! Stratified 10-fold cross-validation of one classifier, with the report
//! the CLI prints.
//!
//!     cargo run --example cross_validation -- [FOLDS] [SEED]

use heartml::classifiers::{ClassifierSpec, NbParams};
use heartml::data::parse_arff;
use heartml::eval::{cross_validate, make_cv_plan};
use heartml::experiment::{resolve_features, run_cell, FeatureMode};
use heartml::selection::CfsConfig;

const DATA: &str = include_str!("data/heart_synthetic_529.arff");

fn main() {
    let mut args = std::env::args().skip(1);
    let folds: usize = args.next().map_or(10, |s| s.parse().expect("FOLDS is a number"));
    let seed: u64 = args.next().map_or(42, |s| s.parse().expect("SEED is a number"));

    let ds = parse_arff(DATA).unwrap();
    let plan = make_cv_plan(&ds, folds, seed).unwrap();
    for (i, fold) in plan.folds.iter().enumerate() {
        let pos = fold.iter().filter(|&&r| ds.class_of(r) == Some(1)).count();
        println!("fold {:>2}: {} rows, {pos} positive", i + 1, fold.len());
    }

    let spec = ClassifierSpec::NaiveBayes(NbParams::default());
    let out = cross_validate(&ds, &spec, &plan).unwrap();
    let wrong: Vec<usize> = out.predictions.iter().filter(|p| p.actual != p.predicted).map(|p| p.row).collect();
    println!("\n{} misclassified, first few rows: {:?}\n", wrong.len(), &wrong[..wrong.len().min(8)]);

    let (features, info) = resolve_features(&ds, &FeatureMode::All, &CfsConfig::default()).unwrap();
    let report = run_cell(&ds, &spec, &features, &info, &plan).unwrap();
    assert_eq!(report.pooled, out.pooled);
    print!("{}", report.to_text());
}
