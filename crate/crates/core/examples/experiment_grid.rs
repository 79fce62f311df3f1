//! Every classifier on every feature set, written out as report files.
//!
//!     cargo run --example experiment_grid -- [OUTPUT_DIR]

use std::path::PathBuf;

use heartml::classifiers::{ClassifierSpec, ForestParams, NbParams, TreeParams};
use heartml::data::parse_arff;
use heartml::experiment::{run_grid, write_grid_reports, FeatureMode, ReportFormat};
use heartml::selection::CfsConfig;

const DATA: &str = include_str!("data/heart_synthetic_529.arff");

fn main() {
    let ds = parse_arff(DATA).unwrap();
    let specs = [
        ClassifierSpec::NaiveBayes(NbParams::default()),
        ClassifierSpec::J48(TreeParams::default()),
        ClassifierSpec::RandomForest(ForestParams { seed: 42, ..ForestParams::default() }),
    ];
    let nine = ["Age", "Sex", "Cp", "Trestbps", "Exang", "OldPeak", "Slope", "Ca", "Thal"];
    let modes = [
        FeatureMode::All,
        FeatureMode::Cfs,
        FeatureMode::Explicit(nine.iter().map(|s| s.to_string()).collect()),
    ];
    let cells = run_grid(&ds, &specs, &modes, 10, 42, &CfsConfig::default()).unwrap();

    let tmp;
    let dir = match std::env::args_os().nth(1) {
        Some(d) => PathBuf::from(d),
        None => {
            tmp = tempfile::tempdir().unwrap();
            tmp.path().to_path_buf()
        }
    };
    let written = write_grid_reports(&dir, &cells, &ReportFormat::ALL).unwrap();
    println!("{} files in {}", written.len(), dir.display());
    print!("\n{}", std::fs::read_to_string(dir.join("summary.txt")).unwrap());
}
