use std::sync::Arc;

use super::{AttributeKind, AttributeSpec, Dataset, Schema, Value};

/// Recodes every non-target nominal attribute as numeric, using the
/// category index as the value. The target column is left untouched.
pub fn nominal_to_numeric_view(ds: &Dataset) -> Dataset {
    let schema = ds.schema();
    let target = schema.target_index();
    let attributes: Vec<AttributeSpec> = schema
        .attributes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if i == target {
                a.clone()
            } else {
                AttributeSpec {
                    name: a.name.clone(),
                    kind: AttributeKind::Numeric,
                    role: a.role,
                }
            }
        })
        .collect();
    let view_schema = Schema::new(attributes).expect("target is unchanged, names are unchanged");
    let rows = ds
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, v)| match *v {
                    Value::Nominal(idx) if i != target => Value::Numeric(idx as f64),
                    other => other,
                })
                .collect()
        })
        .collect();
    Dataset::with_shared_schema(ds.relation(), Arc::new(view_schema), rows).expect("recoded rows fit the view schema")
}
