//! The classifier by feature-set evaluation grid.
//!
//! Every cell shares one stratified fold plan, so cells differ only in the
//! classifier and the features it sees. Cells run in parallel; results
//! come back in grid order and do not depend on the worker count.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifiers::ClassifierSpec;
use crate::data::Dataset;
use crate::eval::{
    cross_validate, make_cv_plan, summary_csv, summary_text, CVPlan, CellReport, CvInfo, DatasetInfo, EvalError,
    FeatureSetInfo, REPORT_VERSION,
};
use crate::selection::{select_features, CfsConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("`{0}` is the class attribute, not a feature")]
    TargetAsFeature(String),
    #[error("explicit feature list is empty")]
    EmptyFeatureList,
    #[error("no classifiers requested")]
    NoClassifiers,
    #[error("no feature modes requested")]
    NoFeatureModes,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Which features a cell trains on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureMode {
    All,
    /// Subset chosen by CFS on the full dataset.
    Cfs,
    Explicit(Vec<String>),
}

impl FeatureMode {
    pub fn key(&self) -> &'static str {
        match self {
            FeatureMode::All => "all",
            FeatureMode::Cfs => "cfs",
            FeatureMode::Explicit(_) => "explicit",
        }
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureMode::Explicit(names) => write!(f, "explicit:{}", names.join(",")),
            other => f.write_str(other.key()),
        }
    }
}

impl FromStr for FeatureMode {
    type Err = String;

    /// `all`, `cfs` or `explicit:Name1,Name2,...`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(FeatureMode::All),
            "cfs" => Ok(FeatureMode::Cfs),
            _ => match s.strip_prefix("explicit:") {
                Some(list) => Ok(FeatureMode::Explicit(
                    list.split(',').map(str::trim).filter(|n| !n.is_empty()).map(String::from).collect(),
                )),
                None => Err(format!("unknown feature mode `{s}` (expected all, cfs or explicit:A,B,...)")),
            },
        }
    }
}

/// Feature attribute indices for `mode`, ascending, plus their description.
pub fn resolve_features(ds: &Dataset, mode: &FeatureMode, cfs: &CfsConfig) -> Result<(Vec<usize>, FeatureSetInfo), ExperimentError> {
    let schema = ds.schema();
    let (indices, merit) = match mode {
        FeatureMode::All => (schema.feature_indices(), None),
        FeatureMode::Cfs => {
            let sel = select_features(ds, cfs);
            (sel.subset.members().to_vec(), Some(sel.merit))
        }
        FeatureMode::Explicit(names) => {
            if names.is_empty() {
                return Err(ExperimentError::EmptyFeatureList);
            }
            let mut idx = Vec::with_capacity(names.len());
            for name in names {
                let i = schema.index_of(name).ok_or_else(|| ExperimentError::UnknownFeature(name.clone()))?;
                if i == schema.target_index() {
                    return Err(ExperimentError::TargetAsFeature(name.clone()));
                }
                idx.push(i);
            }
            idx.sort_unstable();
            idx.dedup();
            (idx, None)
        }
    };
    let info = FeatureSetInfo {
        mode: mode.key().to_owned(),
        attributes: indices.iter().map(|&i| schema.attribute(i).name.clone()).collect(),
        merit,
    };
    Ok((indices, info))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// `<classifier key>-<feature mode key>`, e.g. `rf-cfs`.
    pub name: String,
    pub result: Result<CellReport, ExperimentError>,
}

/// Cross-validates one classifier on one feature set.
pub fn run_cell(
    ds: &Dataset,
    spec: &ClassifierSpec,
    features: &[usize],
    info: &FeatureSetInfo,
    plan: &CVPlan,
) -> Result<CellReport, ExperimentError> {
    let view = ds.project(features);
    let out = cross_validate(&view, spec, plan)?;
    let labels = ds.schema().class_labels();
    Ok(CellReport {
        report_version: REPORT_VERSION,
        classifier: spec.name().to_owned(),
        hyperparameters: spec.clone(),
        feature_set: info.clone(),
        dataset: DatasetInfo {
            relation: ds.relation().to_owned(),
            instances: ds.len(),
            positive_label: labels[1].clone(),
            negative_label: labels[0].clone(),
        },
        cross_validation: CvInfo {
            folds: plan.k,
            seed: plan.seed,
            stratified: plan.stratified,
        },
        pooled: out.pooled,
        per_fold: out.per_fold,
        metrics: out.report,
    })
}

/// Runs every (classifier, feature mode) pair, feature modes outermost.
///
/// Configuration problems (bad fold count, unknown features) fail the whole
/// grid; training failures are reported per cell.
pub fn run_grid(
    ds: &Dataset,
    classifiers: &[ClassifierSpec],
    modes: &[FeatureMode],
    folds: usize,
    seed: u64,
    cfs: &CfsConfig,
) -> Result<Vec<Cell>, ExperimentError> {
    if classifiers.is_empty() {
        return Err(ExperimentError::NoClassifiers);
    }
    if modes.is_empty() {
        return Err(ExperimentError::NoFeatureModes);
    }
    let plan = make_cv_plan(ds, folds, seed)?;
    let feature_sets = modes
        .iter()
        .map(|m| resolve_features(ds, m, cfs))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(&ClassifierSpec, usize)> = (0..modes.len())
        .flat_map(|m| classifiers.iter().map(move |c| (c, m)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(spec, m)| {
            let (features, info) = &feature_sets[m];
            Cell {
                name: format!("{}-{}", spec.key(), modes[m].key()),
                result: run_cell(ds, spec, features, info, &plan),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 3] = [ReportFormat::Text, ReportFormat::Csv, ReportFormat::Json];

    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Text => "txt",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }

    pub fn render(self, report: &CellReport) -> String {
        match self {
            ReportFormat::Text => report.to_text(),
            ReportFormat::Csv => report.to_csv(),
            ReportFormat::Json => report.to_json(),
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" | "txt" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown report format `{s}` (expected text, csv or json)")),
        }
    }
}

/// Writes one file per cell and format, plus `summary.txt` and
/// `summary.csv` over the successful cells. Failed cells get a
/// `<name>.error.txt`. Returns the written paths in order.
pub fn write_grid_reports(dir: &Path, cells: &[Cell], formats: &[ReportFormat]) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> std::io::Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    let mut ok = Vec::new();
    for cell in cells {
        match &cell.result {
            Ok(report) => {
                for &f in formats {
                    put(format!("{}.{}", cell.name, f.extension()), f.render(report))?;
                }
                ok.push(report.clone());
            }
            Err(e) => put(format!("{}.error.txt", cell.name), format!("{e}\n"))?,
        }
    }
    put("summary.txt".into(), summary_text(&ok))?;
    put("summary.csv".into(), summary_csv(&ok))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{NbParams, TreeParams};
    use crate::data::{AttributeSpec, Schema, Value};

    fn ds() -> Dataset {
        let schema = Schema::new(vec![
            AttributeSpec::numeric("x"),
            AttributeSpec::nominal("noise", ["a", "b"]),
            AttributeSpec::nominal("c", ["0", "1"]).as_target(),
        ])
        .unwrap();
        let rows = (0..40)
            .map(|i| {
                vec![
                    Value::Numeric(f64::from(i)),
                    Value::Nominal((i as usize * 7) % 2),
                    Value::Nominal(usize::from(i >= 20)),
                ]
            })
            .collect();
        Dataset::new("grid", schema, rows).unwrap()
    }

    #[test]
    fn parses_modes() {
        assert_eq!("all".parse::<FeatureMode>(), Ok(FeatureMode::All));
        assert_eq!(
            "explicit:Age, Sex".parse::<FeatureMode>(),
            Ok(FeatureMode::Explicit(vec!["Age".into(), "Sex".into()]))
        );
        assert!("some".parse::<FeatureMode>().is_err());
        assert_eq!(FeatureMode::Explicit(vec!["a".into(), "b".into()]).to_string(), "explicit:a,b");
    }

    #[test]
    fn explicit_features_are_checked() {
        let d = ds();
        let cfg = CfsConfig::default();
        let (idx, info) = resolve_features(&d, &FeatureMode::Explicit(vec!["x".into()]), &cfg).unwrap();
        assert_eq!(idx, [0]);
        assert_eq!(info.attributes, ["x"]);
        assert_eq!(
            resolve_features(&d, &FeatureMode::Explicit(vec!["zz".into()]), &cfg),
            Err(ExperimentError::UnknownFeature("zz".into()))
        );
        assert_eq!(
            resolve_features(&d, &FeatureMode::Explicit(vec!["c".into()]), &cfg),
            Err(ExperimentError::TargetAsFeature("c".into()))
        );
        let (idx, info) = resolve_features(&d, &FeatureMode::Cfs, &cfg).unwrap();
        assert_eq!(idx, [0]);
        assert!(info.merit.unwrap() > 0.9);
    }

    #[test]
    fn grid_order_and_errors() {
        let d = ds();
        let specs = [
            ClassifierSpec::NaiveBayes(NbParams::default()),
            ClassifierSpec::J48(TreeParams::default()),
        ];
        let cells = run_grid(&d, &specs, &[FeatureMode::All, FeatureMode::Cfs], 5, 1, &CfsConfig::default()).unwrap();
        let names: Vec<&str> = cells.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["nb-all", "j48-all", "nb-cfs", "j48-cfs"]);
        for c in &cells {
            assert_eq!(c.result.as_ref().unwrap().pooled.total(), 40);
        }
        assert_eq!(
            run_grid(&d, &specs, &[FeatureMode::All], 41, 1, &CfsConfig::default()),
            Err(ExperimentError::Eval(EvalError::TooFewInstances { n: 40, k: 41 }))
        );
    }
}
