use heartml::classifiers::{ClassifierSpec, ForestParams, NbParams, TreeParams};
use heartml::data::parse_arff;
use heartml::experiment::{run_grid, FeatureMode};
use heartml::selection::CfsConfig;

const SCHEMA: &str = include_str!("../schemas/report.schema.json");
const DATA: &str = include_str!("../examples/data/heart_synthetic_529.arff");

#[test]
fn grid_reports_match_schema() {
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let ds = parse_arff(DATA).unwrap();
    let specs = [
        ClassifierSpec::NaiveBayes(NbParams::default()),
        ClassifierSpec::J48(TreeParams::default()),
        ClassifierSpec::RandomForest(ForestParams {
            trees: 5,
            ..ForestParams::default()
        }),
    ];
    let modes = [
        FeatureMode::All,
        FeatureMode::Cfs,
        FeatureMode::Explicit(vec!["Age".into(), "Thal".into()]),
    ];
    let cells = run_grid(&ds, &specs, &modes, 10, 42, &CfsConfig::default()).unwrap();
    assert_eq!(cells.len(), 9);
    for cell in cells {
        let report = cell.result.unwrap();
        let doc: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", cell.name);
    }
}

#[test]
fn schema_rejects_broken_reports() {
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let ds = parse_arff(DATA).unwrap();
    let cells = run_grid(
        &ds,
        &[ClassifierSpec::NaiveBayes(NbParams::default())],
        &[FeatureMode::All],
        10,
        1,
        &CfsConfig::default(),
    )
    .unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&cells[0].result.as_ref().unwrap().to_json()).unwrap();
    assert!(validator.is_valid(&doc));
    doc["pooled"]["tp"] = serde_json::json!(-1);
    assert!(!validator.is_valid(&doc));
    doc["pooled"]["tp"] = serde_json::json!(1);
    doc["timestamp"] = serde_json::json!("now");
    assert!(!validator.is_valid(&doc));
}
