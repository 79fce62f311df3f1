//! Train, save to JSON, load, and check the loaded model agrees.
//!
//!     cargo run --example model_files -- [nb|j48|rf]

use heartml::classifiers::{Classifier, ClassifierSpec, ForestParams, Learner, ModelFile, NbParams, TreeParams};
use heartml::data::parse_arff;

const DATA: &str = include_str!("data/heart_synthetic_529.arff");

fn main() {
    let spec = match std::env::args().nth(1).as_deref() {
        None | Some("j48") => ClassifierSpec::J48(TreeParams::default()),
        Some("nb") => ClassifierSpec::NaiveBayes(NbParams::default()),
        Some("rf") => ClassifierSpec::RandomForest(ForestParams { trees: 20, ..ForestParams::default() }),
        Some(other) => panic!("unknown classifier {other}"),
    };
    let ds = parse_arff(DATA).unwrap();
    let model = spec.fit(&ds).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(format!("{}.json", spec.key()));
    std::fs::write(&path, ModelFile::new(model.clone()).to_json()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    println!("{} model: {} bytes", spec.name(), text.len());
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));

    let loaded = ModelFile::from_json(&text).unwrap();
    loaded.check_schema(ds.schema()).unwrap();
    let same = ds
        .rows()
        .iter()
        .all(|r| loaded.model.predict(r).unwrap() == model.predict(r).unwrap());
    println!("loaded model agrees on all {} rows: {same}", ds.len());

    let tampered = text.replacen("\"version\": 1", "\"version\": 99", 1);
    println!("tampered file: {}", ModelFile::from_json(&tampered).unwrap_err());
}
