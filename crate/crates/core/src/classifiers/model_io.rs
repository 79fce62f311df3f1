//! Versioned JSON model files.
//!
//! ```json
//! {"format": "heartml-model", "version": 1, "model": {"type": "decision_tree", ...}}
//! ```

use serde::{Deserialize, Serialize};

use crate::data::Schema;

use super::{Classifier, ClassifierError, TrainedModel};

pub const MODEL_FORMAT: &str = "heartml-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn new(model: TrainedModel) -> Self {
        Self {
            format: MODEL_FORMAT.to_owned(),
            version: MODEL_VERSION,
            model,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        #[derive(Deserialize)]
        struct Header {
            format: String,
            version: u32,
        }
        let header: Header = serde_json::from_str(text).map_err(|e| ClassifierError::ModelFormat(e.to_string()))?;
        if header.format != MODEL_FORMAT {
            return Err(ClassifierError::ModelFormat(format!("unknown format `{}`", header.format)));
        }
        if header.version != MODEL_VERSION {
            return Err(ClassifierError::ModelFormat(format!(
                "unsupported version {} (expected {MODEL_VERSION})",
                header.version
            )));
        }
        serde_json::from_str(text).map_err(|e| ClassifierError::ModelFormat(e.to_string()))
    }

    /// Fails unless the model was trained on `schema`.
    pub fn check_schema(&self, schema: &Schema) -> Result<(), ClassifierError> {
        if self.model.schema() == schema {
            Ok(())
        } else {
            Err(ClassifierError::SchemaMismatch(
                "data attributes differ from the model's training attributes".into(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{ClassifierSpec, ForestParams, Learner, NbParams, TreeParams};
    use crate::data::{AttributeSpec, Dataset, Value};

    fn ds() -> Dataset {
        let schema = Schema::new(vec![
            AttributeSpec::numeric("x"),
            AttributeSpec::nominal("f", ["p", "q"]),
            AttributeSpec::nominal("c", ["0", "1"]).as_target(),
        ])
        .unwrap();
        let rows = (0..12)
            .map(|i| {
                vec![
                    Value::Numeric(f64::from(i) * 0.37),
                    Value::Nominal(i as usize % 2),
                    Value::Nominal(usize::from(i > 5)),
                ]
            })
            .collect();
        Dataset::new("m", schema, rows).unwrap()
    }

    #[test]
    fn round_trip_predicts_identically() {
        let ds = ds();
        for spec in [
            ClassifierSpec::NaiveBayes(NbParams::default()),
            ClassifierSpec::J48(TreeParams::default()),
            ClassifierSpec::RandomForest(ForestParams {
                trees: 5,
                ..ForestParams::default()
            }),
        ] {
            let model = spec.fit(&ds).unwrap();
            let text = ModelFile::new(model.clone()).to_json();
            let back = ModelFile::from_json(&text).unwrap();
            back.check_schema(ds.schema()).unwrap();
            for r in 0..ds.len() {
                assert_eq!(model.predict(ds.row(r)).unwrap(), back.model.predict(ds.row(r)).unwrap());
            }
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(ModelFile::from_json(r#"{"format":"other","version":1}"#).is_err());
        assert!(ModelFile::from_json(r#"{"format":"heartml-model","version":9}"#).is_err());
        assert!(ModelFile::from_json("not json").is_err());
    }
}
