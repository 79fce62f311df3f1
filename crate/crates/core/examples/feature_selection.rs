//! CFS on the synthetic heart data: discretize, score pairs, search.
//!
//!     cargo run --example feature_selection

use heartml::data::parse_arff;
use heartml::selection::{
    best_first_select, discretize_mdl, select_features, BestFirstOptions, CfsConfig, CfsEvaluator, Discretization,
    FeatureSubset, MdlMode, SubsetEvaluator,
};

const DATA: &str = include_str!("data/heart_synthetic_529.arff");

fn main() {
    let ds = parse_arff(DATA).unwrap();
    let schema = ds.schema();

    let age = schema.index_of("Age").unwrap();
    let cuts = discretize_mdl(&ds, age, MdlMode::Standard).unwrap();
    println!("MDL cut points for Age: {cuts:?}");

    let ev = CfsEvaluator::new(&ds, &Discretization::Mdl);
    println!("\nsymmetric uncertainty with the class:");
    let mut ranked: Vec<(usize, f64)> = ev.features().iter().map(|&f| (f, ev.class_correlation(f))).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (f, su) in &ranked {
        println!("  {:<9} {su:.4}", schema.attribute(*f).name);
    }

    let top2 = FeatureSubset::new(&ds, [ranked[0].0, ranked[1].0]).unwrap();
    println!("\nmerit of {:?}: {}", top2.names(&ds), ev.merit(&top2).unwrap());

    let found = best_first_select(&ev, &BestFirstOptions::default());
    println!("best-first looked at {} subsets", found.evaluated);

    let sel = select_features(&ds, &CfsConfig::default());
    println!("selected {} of {}: {}", sel.attributes.len(), ev.features().len(), sel.attributes.join(", "));
    println!("merit {:.4}", sel.merit);

    let coarse = CfsConfig {
        discretization: Discretization::EqualFrequency(4),
        ..CfsConfig::default()
    };
    println!("with 4 equal-frequency bins: {}", select_features(&ds, &coarse).attributes.join(", "));
}
