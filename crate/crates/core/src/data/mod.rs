//! Tabular data model, ARFF/CSV I/O, preprocessing transforms and the
//! synthetic heart-data generator.

mod arff;
mod csv;
mod schema;
pub mod synthetic;
mod transform;

use std::sync::Arc;

use thiserror::Error;

pub use self::arff::{parse_arff, parse_arff_with_target, write_arff};
pub use self::csv::parse_csv;
pub use self::schema::{heart_schema, AttributeKind, AttributeSpec, ClassLabel, Role, Schema, Value};
pub use self::synthetic::{generate_synthetic, SyntheticSpec};
pub use self::transform::nominal_to_numeric_view;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("row {row} (line {line}): unknown category `{text}` for attribute `{attr}`")]
    UnknownCategory {
        row: usize,
        line: usize,
        attr: String,
        text: String,
    },
    #[error("row {row} (line {line}): expected {expected} cells, found {found}")]
    ArityMismatch {
        row: usize,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} (line {line}): `{text}` is not a finite number for attribute `{attr}`")]
    NonNumericCell {
        row: usize,
        line: usize,
        attr: String,
        text: String,
    },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("unexpected column `{0}`")]
    UnexpectedColumn(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("row {row}: value does not fit attribute `{attr}`")]
    InvalidValue { row: usize, attr: String },
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("csv: {0}")]
    Csv(String),
}

/// An immutable table of typed rows sharing one schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    relation: String,
    schema: Arc<Schema>,
    rows: Vec<Vec<Value>>,
}

impl Dataset {
    /// Validates every row against the schema.
    pub fn new(relation: impl Into<String>, schema: Schema, rows: Vec<Vec<Value>>) -> Result<Self, DataError> {
        Self::with_shared_schema(relation, Arc::new(schema), rows)
    }

    pub fn with_shared_schema(
        relation: impl Into<String>,
        schema: Arc<Schema>,
        rows: Vec<Vec<Value>>,
    ) -> Result<Self, DataError> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(DataError::ArityMismatch {
                    row: r + 1,
                    line: 0,
                    expected: schema.len(),
                    found: row.len(),
                });
            }
            for (value, attr) in row.iter().zip(schema.attributes()) {
                if !attr.accepts(value) {
                    return Err(DataError::InvalidValue {
                        row: r + 1,
                        attr: attr.name.clone(),
                    });
                }
            }
        }
        Ok(Self {
            relation: relation.into(),
            schema,
            rows,
        })
    }

    pub fn with_relation(mut self, relation: impl Into<String>) -> Self {
        self.relation = relation.into();
        self
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn shared_schema(&self) -> Arc<Schema> {
        Arc::clone(&self.schema)
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.rows[i]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn value(&self, row: usize, attr: usize) -> Value {
        self.rows[row][attr]
    }

    /// Class index of a row, `None` when the target cell is missing.
    pub fn class_of(&self, row: usize) -> Option<usize> {
        self.rows[row][self.schema.target_index()].as_nominal()
    }

    /// Per-class instance counts (rows with a missing target are skipped).
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schema.num_classes()];
        for i in 0..self.len() {
            if let Some(c) = self.class_of(i) {
                counts[c] += 1;
            }
        }
        counts
    }

    /// Per-attribute count of missing cells.
    pub fn missing_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schema.len()];
        for row in &self.rows {
            for (c, v) in counts.iter_mut().zip(row) {
                if v.is_missing() {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// New dataset containing the given rows in the given order (repeats allowed).
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        Dataset {
            relation: self.relation.clone(),
            schema: Arc::clone(&self.schema),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// New dataset keeping only the listed attributes plus the target.
    pub fn project(&self, keep: &[usize]) -> Dataset {
        let (schema, cols) = self.schema.project(keep);
        let rows = self
            .rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect();
        Dataset {
            relation: self.relation.clone(),
            schema: Arc::new(schema),
            rows,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        let schema = Schema::new(vec![
            AttributeSpec::numeric("x"),
            AttributeSpec::nominal("c", ["a", "b"]).as_target(),
        ])
        .unwrap();
        Dataset::new(
            "tiny",
            schema,
            vec![
                vec![Value::Numeric(1.0), Value::Nominal(0)],
                vec![Value::Missing, Value::Nominal(1)],
                vec![Value::Numeric(3.0), Value::Nominal(1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn counts() {
        let ds = tiny();
        assert_eq!(ds.class_counts(), vec![1, 2]);
        assert_eq!(ds.missing_counts(), vec![1, 0]);
    }

    #[test]
    fn new_rejects_bad_rows() {
        let schema = tiny().schema().clone();
        let short = Dataset::new("t", schema.clone(), vec![vec![Value::Numeric(1.0)]]);
        assert!(matches!(short, Err(DataError::ArityMismatch { .. })));
        let bad = Dataset::new("t", schema, vec![vec![Value::Numeric(1.0), Value::Nominal(2)]]);
        assert!(matches!(bad, Err(DataError::InvalidValue { .. })));
    }

    #[test]
    fn select_and_project() {
        let ds = tiny();
        let sub = ds.select_rows(&[2, 2, 0]);
        assert_eq!(sub.len(), 3);
        assert_eq!(sub.class_counts(), vec![1, 2]);
        let proj = ds.project(&[]);
        assert_eq!(proj.schema().len(), 1);
        assert_eq!(proj.row(1), &[Value::Nominal(1)]);
    }
}
