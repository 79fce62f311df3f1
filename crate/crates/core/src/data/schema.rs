use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::DataError;

/// What kind of values a column holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    /// Ordered category labels; cells store an index into this list.
    Nominal(Vec<String>),
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Feature,
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    pub role: Role,
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Numeric,
            role: Role::Feature,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Nominal(labels.into_iter().map(Into::into).collect()),
            role: Role::Feature,
        }
    }

    pub fn as_target(mut self) -> Self {
        self.role = Role::Target;
        self
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, AttributeKind::Numeric)
    }

    /// Category labels, or `None` for numeric attributes.
    pub fn categories(&self) -> Option<&[String]> {
        match &self.kind {
            AttributeKind::Nominal(labels) => Some(labels),
            AttributeKind::Numeric => None,
        }
    }

    pub fn category_index(&self, label: &str) -> Option<usize> {
        self.categories()?.iter().position(|c| c == label)
    }

    /// Whether `value` is type-compatible with this attribute.
    pub fn accepts(&self, value: &Value) -> bool {
        match (value, &self.kind) {
            (Value::Missing, _) => true,
            (Value::Numeric(x), AttributeKind::Numeric) => x.is_finite(),
            (Value::Nominal(i), AttributeKind::Nominal(labels)) => *i < labels.len(),
            _ => false,
        }
    }
}

/// Ordered list of attributes with exactly one nominal target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<AttributeSpec>", into = "Vec<AttributeSpec>")]
pub struct Schema {
    attributes: Vec<AttributeSpec>,
    target: usize,
}

impl Schema {
    pub fn new(attributes: Vec<AttributeSpec>) -> Result<Self, DataError> {
        let mut seen = HashSet::new();
        for attr in &attributes {
            if attr.name.is_empty() {
                return Err(DataError::InvalidSchema("empty attribute name".into()));
            }
            if !seen.insert(attr.name.as_str()) {
                return Err(DataError::InvalidSchema(format!(
                    "duplicate attribute name `{}`",
                    attr.name
                )));
            }
            if let AttributeKind::Nominal(labels) = &attr.kind {
                if labels.is_empty() {
                    return Err(DataError::InvalidSchema(format!(
                        "nominal attribute `{}` has no categories",
                        attr.name
                    )));
                }
                let mut uniq = HashSet::new();
                if let Some(dup) = labels.iter().find(|l| !uniq.insert(l.as_str())) {
                    return Err(DataError::InvalidSchema(format!(
                        "nominal attribute `{}` declares category `{dup}` twice",
                        attr.name
                    )));
                }
            }
        }
        let targets: Vec<usize> = attributes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.role == Role::Target)
            .map(|(i, _)| i)
            .collect();
        let target = match targets.as_slice() {
            [t] => *t,
            [] => return Err(DataError::InvalidSchema("no target attribute".into())),
            _ => return Err(DataError::InvalidSchema("more than one target attribute".into())),
        };
        if attributes[target].is_numeric() {
            return Err(DataError::InvalidSchema(format!(
                "target attribute `{}` must be nominal",
                attributes[target].name
            )));
        }
        Ok(Self { attributes, target })
    }

    /// Builds a schema from attributes declared without roles, marking the
    /// attribute called `target` (or the last one, when `None`) as the target.
    pub fn with_target(mut attributes: Vec<AttributeSpec>, target: Option<&str>) -> Result<Self, DataError> {
        if attributes.is_empty() {
            return Err(DataError::InvalidSchema("no attributes".into()));
        }
        let idx = match target {
            Some(name) => attributes
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| DataError::InvalidSchema(format!("target attribute `{name}` not declared")))?,
            None => attributes.len() - 1,
        };
        for (i, a) in attributes.iter_mut().enumerate() {
            a.role = if i == idx { Role::Target } else { Role::Feature };
        }
        Self::new(attributes)
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn attribute(&self, idx: usize) -> &AttributeSpec {
        &self.attributes[idx]
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn target_index(&self) -> usize {
        self.target
    }

    pub fn target(&self) -> &AttributeSpec {
        &self.attributes[self.target]
    }

    pub fn class_labels(&self) -> &[String] {
        self.target().categories().expect("target is nominal")
    }

    pub fn num_classes(&self) -> usize {
        self.class_labels().len()
    }

    /// Indices of all non-target attributes, ascending.
    pub fn feature_indices(&self) -> Vec<usize> {
        (0..self.attributes.len()).filter(|&i| i != self.target).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Keeps the listed attributes (in schema order) plus the target.
    pub fn project(&self, keep: &[usize]) -> (Schema, Vec<usize>) {
        let mut cols: Vec<usize> = keep.iter().copied().filter(|&i| i != self.target).collect();
        cols.push(self.target);
        cols.sort_unstable();
        cols.dedup();
        let attributes = cols.iter().map(|&i| self.attributes[i].clone()).collect();
        let schema = Schema::new(attributes).expect("projection of a valid schema is valid");
        (schema, cols)
    }
}

impl TryFrom<Vec<AttributeSpec>> for Schema {
    type Error = DataError;

    fn try_from(attributes: Vec<AttributeSpec>) -> Result<Self, Self::Error> {
        Schema::new(attributes)
    }
}

impl From<Schema> for Vec<AttributeSpec> {
    fn from(schema: Schema) -> Self {
        schema.attributes
    }
}

/// A single cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Nominal(usize),
    Numeric(f64),
    Missing,
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Numeric(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_nominal(&self) -> Option<usize> {
        match *self {
            Value::Nominal(i) => Some(i),
            _ => None,
        }
    }
}

/// Index into the target attribute's categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassLabel(pub usize);

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Built-in 14-attribute heart-disease schema. `Target` uses `1` for
/// infected and `0` for not infected.
pub fn heart_schema() -> Schema {
    Schema::new(vec![
        AttributeSpec::numeric("Age"),
        AttributeSpec::nominal("Sex", ["0", "1"]),
        AttributeSpec::nominal("Cp", ["1", "2", "3", "4"]),
        AttributeSpec::numeric("Trestbps"),
        AttributeSpec::numeric("Chol"),
        AttributeSpec::nominal("Fbs", ["0", "1"]),
        AttributeSpec::nominal("Restecg", ["0", "1", "2"]),
        AttributeSpec::numeric("Thalach"),
        AttributeSpec::nominal("Exang", ["0", "1"]),
        AttributeSpec::numeric("OldPeak"),
        AttributeSpec::nominal("Slope", ["1", "2", "3"]),
        // Integer-coded 0-3 but declared numeric.
        AttributeSpec::numeric("Ca"),
        AttributeSpec::nominal("Thal", ["3", "6", "7"]),
        AttributeSpec::nominal("Target", ["0", "1"]).as_target(),
    ])
    .expect("heart schema is valid")
}
