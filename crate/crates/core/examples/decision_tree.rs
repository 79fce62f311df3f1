//! J48-style tree: split scores at the root, the grown tree, and what
//! error-based pruning removes.
//!
//!     cargo run --example decision_tree -- [CONFIDENCE]

use heartml::classifiers::{c45_train, evaluate_splits, Classifier, SplitKind, TreeParams};
use heartml::data::parse_arff;

const DATA: &str = include_str!("data/heart_synthetic_529.arff");

fn main() {
    let cf: f64 = std::env::args().nth(1).map_or(0.25, |s| s.parse().expect("CONFIDENCE is a number"));
    let ds = parse_arff(DATA).unwrap();
    let schema = ds.schema();

    println!("root candidates:");
    let mut cands = evaluate_splits(&ds, 2).unwrap();
    cands.sort_by(|a, b| b.gain_ratio.total_cmp(&a.gain_ratio));
    for c in cands.iter().take(5) {
        let how = match c.kind {
            SplitKind::Threshold(t) => format!("<= {t}"),
            SplitKind::Multiway => "multiway".to_string(),
        };
        println!(
            "  {:<9} {how:<12} gain {:.4}  ratio {:.4}",
            schema.attribute(c.attr).name,
            c.gain,
            c.gain_ratio
        );
    }

    let grown = c45_train(&ds, &TreeParams { prune: false, confidence: cf, ..TreeParams::default() }).unwrap();
    let pruned = grown.pruned(cf);
    println!(
        "\nunpruned: {} nodes, {} leaves, depth {}, estimated errors {:.1}",
        grown.num_nodes(),
        grown.num_leaves(),
        grown.depth(),
        grown.pessimistic_error(cf)
    );
    println!(
        "pruned:   {} nodes, {} leaves, depth {}, estimated errors {:.1}",
        pruned.num_nodes(),
        pruned.num_leaves(),
        pruned.depth(),
        pruned.pessimistic_error(cf)
    );

    let correct = |t: &heartml::classifiers::DecisionTree| {
        (0..ds.len())
            .filter(|&r| Some(t.predict_class(ds.row(r)).unwrap().0) == ds.class_of(r))
            .count()
    };
    println!("training accuracy {} vs {} of {}", correct(&grown), correct(&pruned), ds.len());

    println!("\n{}", pruned.render());
}
