//! Accuracy, sensitivity and specificity with exact 95% intervals for a
//! handful of confusion matrices.
//!
//!     cargo run --example reference_metrics -- [TP FN FP TN]

use heartml::eval::{ConfusionMatrix, MetricsReport};

fn show(name: &str, cm: &ConfusionMatrix) {
    let m = MetricsReport::from_matrix(cm, 0.95);
    println!("{name}  (TP {} FN {} FP {} TN {})", cm.tp, cm.fn_, cm.fp, cm.tn);
    for (label, r) in [("Sensitivity", &m.sensitivity), ("Specificity", &m.specificity), ("Accuracy", &m.accuracy)] {
        println!("  {label:<12} {:>7}%  {}", r.display(), r.display_ci());
    }
    println!("  Misclassified {}%\n", m.misclassification.display());
}

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("counts are numbers")).collect();
    if let [tp, fn_, fp, tn] = args[..] {
        show("custom", &ConfusionMatrix::new(tp, tn, fp, fn_));
        return;
    }
    // (name, TP, FN, FP, TN)
    let matrices = [
        ("J48, all features", 298, 3, 10, 218),
        ("J48, selected features", 298, 3, 9, 219),
        ("Naive Bayes, all features", 280, 21, 46, 182),
        ("Naive Bayes, selected features", 277, 24, 35, 193),
        ("Random forest, all features", 300, 1, 4, 224),
        ("Random forest, selected features", 301, 0, 4, 224),
    ];
    for (name, tp, fn_, fp, tn) in matrices {
        show(name, &ConfusionMatrix::new(tp, tn, fp, fn_));
    }
}
