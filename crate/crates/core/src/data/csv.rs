use std::collections::HashMap;

use super::arff::cells_to_row;
use super::{DataError, Dataset, Schema};

/// Parses comma-separated text with a mandatory header row. Columns may
/// appear in any order; the result follows schema order. Quoted cells are
/// never treated as missing.
pub fn parse_csv(text: &str, schema: &Schema) -> Result<Dataset, DataError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(|e| DataError::Csv(e.to_string()))?.clone();
    let mut position: HashMap<&str, usize> = HashMap::new();
    for (i, name) in header.iter().enumerate() {
        if schema.index_of(name).is_none() {
            return Err(DataError::UnexpectedColumn(name.to_string()));
        }
        if position.insert(name, i).is_some() {
            return Err(DataError::Csv(format!("column `{name}` appears twice")));
        }
    }
    let order: Vec<usize> = schema
        .attributes()
        .iter()
        .map(|a| {
            position
                .get(a.name.as_str())
                .copied()
                .ok_or_else(|| DataError::MissingColumn(a.name.clone()))
        })
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    let mut record = ::csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(DataError::Csv(e.to_string())),
        }
        let row_no = rows.len() + 1;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(DataError::ArityMismatch {
                row: row_no,
                line,
                expected: header.len(),
                found: record.len(),
            });
        }
        // csv strips quotes, so "?" and ? are indistinguishable here; both mean missing.
        let cells = order.iter().map(|&i| (&record[i], false));
        rows.push(cells_to_row(schema, cells, row_no, line)?);
    }

    Ok(Dataset::new("csv", schema.clone(), rows).expect("rows were validated while parsing"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{heart_schema, parse_arff, Value};

    const CSV: &str = "Age,Sex,Cp,Trestbps,Chol,Fbs,Restecg,Thalach,Exang,OldPeak,Slope,Ca,Thal,Target
63,1,1,145,233,1,2,150,0,2.3,3,0,6,1
67,1,4,160,286,0,2,108,1,1.5,2,3,3,0
41,0,2,130,204,0,2,172,0,1.4,1,0,3,0
";

    #[test]
    fn parses_in_schema_order() {
        let ds = parse_csv(CSV, &heart_schema()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.row(0)[0], Value::Numeric(63.0));
        assert_eq!(ds.row(0)[13], Value::Nominal(1));
    }

    #[test]
    fn permuted_columns_reorder() {
        let permuted = "Target,Age,Thal,Sex,Cp,Trestbps,Chol,Fbs,Restecg,Thalach,Exang,OldPeak,Slope,Ca
1,63,6,1,1,145,233,1,2,150,0,2.3,3,0
";
        let a = parse_csv(permuted, &heart_schema()).unwrap();
        let b = parse_csv(CSV, &heart_schema()).unwrap().select_rows(&[0]);
        assert_eq!(a, b);
    }

    #[test]
    fn numeric_cell_error() {
        let bad = CSV.replace("67,1,4", "abc,1,4");
        match parse_csv(&bad, &heart_schema()) {
            Err(DataError::NonNumericCell { row, line, attr, text }) => {
                assert_eq!((row, line, attr.as_str(), text.as_str()), (2, 3, "Age", "abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_errors() {
        let missing = CSV.replacen("Age,", "", 1);
        assert!(matches!(parse_csv(&missing, &heart_schema()), Err(DataError::MissingColumn(c)) if c == "Age"));
        let extra = CSV.replacen("Age,", "Age,Foo,", 1);
        assert!(matches!(parse_csv(&extra, &heart_schema()), Err(DataError::UnexpectedColumn(c)) if c == "Foo"));
        let short = CSV.replace("41,0,2,130,", "41,0,2,");
        assert!(matches!(parse_csv(&short, &heart_schema()), Err(DataError::ArityMismatch { row: 3, .. })));
    }

    #[test]
    fn quoted_cells_and_missing() {
        let text = "x,\"c\"\n\"1.5\",\"a b\"\n?,\"a b\"\n";
        let schema = Schema::new(vec![
            crate::data::AttributeSpec::numeric("x"),
            crate::data::AttributeSpec::nominal("c", ["a b"]).as_target(),
        ])
        .unwrap();
        let ds = parse_csv(text, &schema).unwrap();
        assert_eq!(ds.row(0), &[Value::Numeric(1.5), Value::Nominal(0)]);
        assert_eq!(ds.row(1)[0], Value::Missing);
    }

    #[test]
    fn matches_arff_fixture() {
        let arff = parse_arff(&crate::data::write_arff(&parse_csv(CSV, &heart_schema()).unwrap())).unwrap();
        let csv = parse_csv(CSV, &heart_schema()).unwrap();
        assert_eq!(arff.rows(), csv.rows());
        assert_eq!(arff.schema(), csv.schema());
    }
}
