//! Per-run reports as text, CSV and JSON.
//!
//! The JSON layout is described by `schemas/report.schema.json` and carries
//! `report_version`. Reports hold no timestamps or host details, so equal
//! inputs give byte-equal files.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classifiers::ClassifierSpec;

use super::{format_ratio_percent, ConfusionMatrix, MetricsReport, RateEstimate};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSetInfo {
    /// `all`, `cfs` or `explicit`.
    pub mode: String,
    pub attributes: Vec<String>,
    /// CFS merit of the subset, when selection ran.
    pub merit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub relation: String,
    pub instances: usize,
    pub positive_label: String,
    pub negative_label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvInfo {
    pub folds: usize,
    pub seed: u64,
    pub stratified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub report_version: u32,
    pub classifier: String,
    pub hyperparameters: ClassifierSpec,
    pub feature_set: FeatureSetInfo,
    pub dataset: DatasetInfo,
    pub cross_validation: CvInfo,
    pub pooled: ConfusionMatrix,
    pub per_fold: Vec<ConfusionMatrix>,
    pub metrics: MetricsReport,
}

pub const CSV_HEADER: &str = "classifier,features,attributes,tp,tn,fp,fn,accuracy,accuracy_ci_lower,accuracy_ci_upper,\
sensitivity,sensitivity_ci_lower,sensitivity_ci_upper,specificity,specificity_ci_lower,specificity_ci_upper,misclassification";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v}"))
}

fn rate_cells(r: &RateEstimate) -> String {
    format!("{},{},{}", opt(r.percent), opt(r.ci_lower), opt(r.ci_upper))
}

impl CellReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Row matching [`CSV_HEADER`]; values are unrounded.
    pub fn csv_row(&self) -> String {
        let m = &self.metrics;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.classifier,
            self.feature_set.mode,
            self.feature_set.attributes.join(";"),
            self.pooled.tp,
            self.pooled.tn,
            self.pooled.fp,
            self.pooled.fn_,
            rate_cells(&m.accuracy),
            rate_cells(&m.sensitivity),
            rate_cells(&m.specificity),
            opt(m.misclassification.percent),
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.csv_row())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.dataset;
        let cv = &self.cross_validation;
        let _ = writeln!(
            out,
            "{} with {} features ({})",
            self.classifier,
            self.feature_set.mode,
            self.feature_set.attributes.len()
        );
        let _ = writeln!(out, "Features: {}", self.feature_set.attributes.join(", "));
        if let Some(merit) = self.feature_set.merit {
            let _ = writeln!(out, "Subset merit: {merit:.4}");
        }
        let _ = writeln!(
            out,
            "{}-fold {}cross-validation, seed {}, {} instances of `{}`",
            cv.folds,
            if cv.stratified { "stratified " } else { "" },
            cv.seed,
            d.instances,
            d.relation
        );
        out.push('\n');

        let p = &self.pooled;
        let pos = format!("Predicted {}", d.positive_label);
        let neg = format!("Predicted {}", d.negative_label);
        let w = pos.len().max(neg.len()).max(6);
        let _ = writeln!(out, "{:<18}{pos:>w$}  {neg:>w$}", "Confusion matrix");
        let _ = writeln!(out, "{:<18}{:>w$}  {:>w$}", format!("  Actual {}", d.positive_label), p.tp, p.fn_);
        let _ = writeln!(out, "{:<18}{:>w$}  {:>w$}", format!("  Actual {}", d.negative_label), p.fp, p.tn);
        out.push('\n');

        let m = &self.metrics;
        let level = format!("{}% CI", (m.confidence_level * 100.0).round());
        let _ = writeln!(out, "{:<19}{:<10}{level}", "Metric", "Value");
        for (name, r) in [
            ("Accuracy", &m.accuracy),
            ("Sensitivity", &m.sensitivity),
            ("Specificity", &m.specificity),
        ] {
            let value = if r.n == 0 { r.display() } else { format!("{}%", r.display()) };
            let _ = writeln!(out, "{name:<19}{value:<10}{}", r.display_ci());
        }
        let mis = &m.misclassification;
        let value = if mis.n == 0 { mis.display() } else { format!("{}%", mis.display()) };
        let _ = writeln!(out, "{:<19}{value}", "Misclassification");
        out.push('\n');

        let _ = writeln!(out, "Per-fold matrices (TP TN FP FN)");
        for (i, f) in self.per_fold.iter().enumerate() {
            let _ = writeln!(out, "  fold {:>2}: {} {} {} {}", i + 1, f.tp, f.tn, f.fp, f.fn_);
        }
        out
    }
}

fn cell_text(r: &RateEstimate) -> String {
    if r.n == 0 {
        "undefined".into()
    } else {
        format!("{}%", format_ratio_percent(r.successes, r.n))
    }
}

/// One line per report: accuracy, sensitivity and specificity side by side.
pub fn summary_text(reports: &[CellReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<14}{:<10}{:>10}{:>13}{:>13}",
        "Classifier", "Features", "Accuracy", "Sensitivity", "Specificity"
    );
    for r in reports {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{:<14}{:<10}{:>10}{:>13}{:>13}",
            r.classifier,
            r.feature_set.mode,
            cell_text(&m.accuracy),
            cell_text(&m.sensitivity),
            cell_text(&m.specificity)
        );
    }
    out
}

pub fn summary_csv(reports: &[CellReport]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::TreeParams;

    fn sample() -> CellReport {
        let pooled = ConfusionMatrix::new(298, 218, 10, 3);
        CellReport {
            report_version: REPORT_VERSION,
            classifier: "J48".into(),
            hyperparameters: ClassifierSpec::J48(TreeParams::default()),
            feature_set: FeatureSetInfo {
                mode: "all".into(),
                attributes: vec!["Age".into(), "Sex".into()],
                merit: None,
            },
            dataset: DatasetInfo {
                relation: "heart".into(),
                instances: 529,
                positive_label: "1".into(),
                negative_label: "0".into(),
            },
            cross_validation: CvInfo {
                folds: 10,
                seed: 42,
                stratified: true,
            },
            pooled,
            per_fold: vec![pooled],
            metrics: MetricsReport::from_matrix(&pooled, 0.95),
        }
    }

    #[test]
    fn text_shows_rounded_metrics() {
        let t = sample().to_text();
        assert!(t.contains("Accuracy           97.54%"), "{t}");
        assert!(t.contains("Sensitivity        99.00%    97.12% to 99.79%"), "{t}");
        assert!(t.contains("Specificity        95.61%"), "{t}");
        assert!(t.contains("Misclassification  2.46%"), "{t}");
        assert!(t.contains("seed 42"));
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: CellReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["pooled"]["fn"], 3);
        assert_eq!(v["hyperparameters"]["classifier"], "j48");
    }

    #[test]
    fn csv_columns_line_up() {
        let r = sample();
        let cols = CSV_HEADER.split(',').count();
        assert_eq!(r.csv_row().split(',').count(), cols);
        let s = summary_text(&[r]);
        assert!(s.lines().nth(1).unwrap().contains("97.54%"));
    }
}
