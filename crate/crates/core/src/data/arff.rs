//! Dense ARFF subset: nominal and numeric attributes, `?` for missing,
//! `%` comment lines, single- or double-quoted names and labels.

use std::fmt::Write as _;

use super::{AttributeKind, AttributeSpec, DataError, Dataset, Schema, Value};

/// Parses ARFF text; the last declared attribute becomes the target.
pub fn parse_arff(text: &str) -> Result<Dataset, DataError> {
    parse_arff_with_target(text, None)
}

/// Parses ARFF text, marking `target` (or the last attribute) as the class.
pub fn parse_arff_with_target(text: &str, target: Option<&str>) -> Result<Dataset, DataError> {
    let mut relation: Option<String> = None;
    let mut attributes = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut data_line = None;

    for (lineno, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let malformed = |reason: &str| DataError::MalformedHeader {
            line: lineno,
            reason: reason.to_string(),
        };
        let (keyword, rest) = split_keyword(line);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {
                if relation.is_some() {
                    return Err(malformed("duplicate @relation"));
                }
                let (name, tail) = read_token(rest).map_err(|e| malformed(&e))?;
                if !tail.trim().is_empty() {
                    return Err(malformed("trailing text after relation name"));
                }
                relation = Some(name);
            }
            "@attribute" => {
                if relation.is_none() {
                    return Err(malformed("@attribute before @relation"));
                }
                let (name, tail) = read_token(rest).map_err(|e| malformed(&e))?;
                let kind = parse_kind(tail.trim()).map_err(|e| malformed(&e))?;
                attributes.push(AttributeSpec {
                    name,
                    kind,
                    role: super::Role::Feature,
                });
            }
            "@data" => {
                if relation.is_none() {
                    return Err(malformed("@data before @relation"));
                }
                if attributes.is_empty() {
                    return Err(malformed("@data without attribute declarations"));
                }
                data_line = Some(lineno);
                break;
            }
            _ => return Err(malformed(&format!("unexpected `{keyword}`"))),
        }
    }

    let Some(data_lineno) = data_line else {
        return Err(DataError::MalformedHeader {
            line: text.lines().count(),
            reason: "missing @data section".into(),
        });
    };
    let schema = Schema::with_target(attributes, target).map_err(|e| match e {
        DataError::InvalidSchema(reason) => DataError::MalformedHeader {
            line: data_lineno,
            reason,
        },
        other => other,
    })?;

    let mut rows = Vec::new();
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line.starts_with('{') {
            return Err(DataError::MalformedHeader {
                line: lineno,
                reason: "sparse data rows are not supported".into(),
            });
        }
        let row_no = rows.len() + 1;
        let cells = split_cells(line).map_err(|reason| DataError::MalformedHeader { line: lineno, reason })?;
        rows.push(cells_to_row(&schema, cells.iter().map(|c| (c.text.as_str(), c.quoted)), row_no, lineno)?);
    }

    Ok(Dataset::new(relation.unwrap_or_default(), schema, rows).expect("rows were validated while parsing"))
}

/// Resolves one row of raw cell text against `schema`.
pub(super) fn cells_to_row<'a>(
    schema: &Schema,
    cells: impl ExactSizeIterator<Item = (&'a str, bool)>,
    row: usize,
    line: usize,
) -> Result<Vec<Value>, DataError> {
    if cells.len() != schema.len() {
        return Err(DataError::ArityMismatch {
            row,
            line,
            expected: schema.len(),
            found: cells.len(),
        });
    }
    cells
        .zip(schema.attributes())
        .map(|((text, quoted), attr)| parse_cell(attr, text, quoted, row, line))
        .collect()
}

fn parse_cell(attr: &AttributeSpec, text: &str, quoted: bool, row: usize, line: usize) -> Result<Value, DataError> {
    if !quoted && text == "?" {
        return Ok(Value::Missing);
    }
    match &attr.kind {
        AttributeKind::Numeric => parse_real(text).map(Value::Numeric).ok_or_else(|| DataError::NonNumericCell {
            row,
            line,
            attr: attr.name.clone(),
            text: text.to_string(),
        }),
        AttributeKind::Nominal(labels) => labels
            .iter()
            .position(|l| l == text)
            .map(Value::Nominal)
            .ok_or_else(|| DataError::UnknownCategory {
                row,
                line,
                attr: attr.name.clone(),
                text: text.to_string(),
            }),
    }
}

/// Decimal real with optional sign, fraction and exponent. Rejects the
/// `inf`/`nan` spellings `f64::from_str` would otherwise accept.
pub(super) fn parse_real(text: &str) -> Option<f64> {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    let starts_ok = body.starts_with(|c: char| c.is_ascii_digit() || c == '.');
    if !starts_ok || !body.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-')) {
        return None;
    }
    text.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim_start()),
        None => (line, ""),
    }
}

/// Reads a possibly quoted token, returning it and the remaining text.
fn read_token(s: &str) -> Result<(String, &str), String> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Err("expected a name".into()),
        Some((_, q @ ('\'' | '"'))) => {
            let mut out = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &s[i + 1..]));
                } else {
                    out.push(c);
                }
            }
            Err("unterminated quote".into())
        }
        Some(_) => {
            let end = s.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

fn parse_kind(spec: &str) -> Result<AttributeKind, String> {
    if let Some(inner) = spec.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| "nominal declaration missing `}`".to_string())?;
        if inner.trim().is_empty() {
            return Err("nominal declaration with no categories".into());
        }
        let labels: Vec<String> = split_cells(inner)?.into_iter().map(|c| c.text).collect();
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(format!("duplicate category `{dup}`"));
        }
        return Ok(AttributeKind::Nominal(labels));
    }
    let word = spec.split_whitespace().next().unwrap_or("");
    match word.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Ok(AttributeKind::Numeric),
        "" => Err("missing attribute type".into()),
        other => Err(format!("unsupported attribute type `{other}`")),
    }
}

struct Cell {
    text: String,
    quoted: bool,
}

/// Splits a comma-separated line, honouring quotes and backslash escapes.
fn split_cells(line: &str) -> Result<Vec<Cell>, String> {
    let mut cells = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let cell = match chars.peek() {
            Some(&q @ ('\'' | '"')) => {
                chars.next();
                let mut text = String::new();
                let mut closed = false;
                while let Some(c) = chars.next() {
                    match c {
                        '\\' => text.push(chars.next().ok_or("dangling escape")?),
                        c if c == q => {
                            closed = true;
                            break;
                        }
                        c => text.push(c),
                    }
                }
                if !closed {
                    return Err("unterminated quote".into());
                }
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
                if chars.peek().is_some_and(|&c| c != ',') {
                    return Err("text after closing quote".into());
                }
                Cell { text, quoted: true }
            }
            _ => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c == ',' {
                        break;
                    }
                    text.push(c);
                    chars.next();
                }
                Cell {
                    text: text.trim_end().to_string(),
                    quoted: false,
                }
            }
        };
        cells.push(cell);
        match chars.next() {
            Some(',') => continue,
            None => break,
            Some(_) => unreachable!("cells end at a comma or end of line"),
        }
    }
    Ok(cells)
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == "?"
        || s.starts_with(['@', '%'])
        || s.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '{' | '}' | '\\'))
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if matches!(c, '\'' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

/// Serializes a dataset as dense ARFF. Missing cells are written as `?`.
pub fn write_arff(ds: &Dataset) -> String {
    let schema = ds.schema();
    let mut out = String::new();
    let _ = writeln!(out, "@relation {}", quote(ds.relation()));
    out.push('\n');
    for attr in schema.attributes() {
        let kind = match &attr.kind {
            AttributeKind::Numeric => "numeric".to_string(),
            AttributeKind::Nominal(labels) => {
                let quoted: Vec<String> = labels.iter().map(|l| quote(l)).collect();
                format!("{{{}}}", quoted.join(","))
            }
        };
        let _ = writeln!(out, "@attribute {} {}", quote(&attr.name), kind);
    }
    out.push_str("\n@data\n");
    for row in ds.rows() {
        let cells: Vec<String> = row
            .iter()
            .zip(schema.attributes())
            .map(|(v, attr)| match *v {
                Value::Missing => "?".to_string(),
                Value::Numeric(x) => format!("{x}"),
                Value::Nominal(i) => quote(&attr.categories().expect("nominal")[i]),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::heart_schema;

    const FIXTURE: &str = "% three heart rows
@RELATION heart

@attribute Age numeric
@attribute Sex {0,1}
@attribute Cp {1,2,3,4}
@attribute Trestbps numeric
@attribute Chol numeric
@attribute Fbs {0,1}
@attribute Restecg {0,1,2}
@attribute Thalach numeric
@attribute Exang {0,1}
@attribute OldPeak numeric
@attribute Slope {1,2,3}
@attribute Ca numeric
@attribute Thal {3,6,7}
@attribute Target {0,1}

@data
63,1,1,145,233,1,2,150,0,2.3,3,0,6,1
67,1,4,160,286,0,2,108,1,1.5,2,3,3,0
41,0,2,130,204,0,2,172,0,1.4,1,0,3,0
";

    #[test]
    fn parses_heart_fixture_field_by_field() {
        let ds = parse_arff(FIXTURE).unwrap();
        assert_eq!(ds.relation(), "heart");
        assert_eq!(ds.schema(), &heart_schema());
        assert_eq!(ds.len(), 3);
        let r = ds.row(0);
        assert_eq!(r[0], Value::Numeric(63.0));
        assert_eq!(r[1], Value::Nominal(1));
        assert_eq!(r[2], Value::Nominal(0)); // Cp "1"
        assert_eq!(r[3], Value::Numeric(145.0));
        assert_eq!(r[4], Value::Numeric(233.0));
        assert_eq!(r[5], Value::Nominal(1));
        assert_eq!(r[6], Value::Nominal(2));
        assert_eq!(r[7], Value::Numeric(150.0));
        assert_eq!(r[8], Value::Nominal(0));
        assert_eq!(r[9], Value::Numeric(2.3));
        assert_eq!(r[10], Value::Nominal(2)); // Slope "3"
        assert_eq!(r[11], Value::Numeric(0.0));
        assert_eq!(r[12], Value::Nominal(1)); // Thal "6"
        assert_eq!(r[13], Value::Nominal(1)); // infected
        assert_eq!(ds.row(1)[2], Value::Nominal(3)); // Cp "4"
        assert_eq!(ds.class_counts(), vec![2, 1]);
    }

    #[test]
    fn target_declaration_lookup() {
        let ds = parse_arff("@relation r\n@attribute x numeric\n@attribute Target {0,1}\n@data\n1,1\n").unwrap();
        assert_eq!(ds.row(0)[1], Value::Nominal(1));
    }

    #[test]
    fn short_row_is_arity_mismatch() {
        let text = FIXTURE.replace("63,1,1,145,233,1,2,150,0,2.3,3,0,6,1", "63,1,1,145,233,1,2,150,0,2.3,3,0,6");
        match parse_arff(&text) {
            Err(DataError::ArityMismatch { row, expected, found, line }) => {
                assert_eq!((row, expected, found, line), (1, 14, 13, 20));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cell_errors() {
        let bad_cat = FIXTURE.replace("41,0,2,", "41,0,9,");
        assert!(matches!(
            parse_arff(&bad_cat),
            Err(DataError::UnknownCategory { row: 3, ref attr, ref text, .. }) if attr == "Cp" && text == "9"
        ));
        let bad_num = FIXTURE.replace("67,1,4", "abc,1,4");
        assert!(matches!(parse_arff(&bad_num), Err(DataError::NonNumericCell { row: 2, .. })));
        let nan = FIXTURE.replace("67,1,4", "NaN,1,4");
        assert!(matches!(parse_arff(&nan), Err(DataError::NonNumericCell { .. })));
        let inf = FIXTURE.replace("67,1,4", "inf,1,4");
        assert!(matches!(parse_arff(&inf), Err(DataError::NonNumericCell { .. })));
    }

    #[test]
    fn category_match_is_case_sensitive() {
        let text = "@relation r\n@attribute c {Yes,No}\n@data\nyes\n";
        assert!(matches!(parse_arff(text), Err(DataError::UnknownCategory { .. })));
    }

    #[test]
    fn header_errors() {
        for (text, want_line) in [
            ("@relation r\n@attribute s string\n@attribute c {a}\n@data\n", 2),
            ("@relation r\n@attribute d date\n@data\n", 2),
            ("@relation r\n@attribute c {a,b\n@data\n", 2),
            ("@relation r\n@attribute c {a,a}\n@data\n", 2),
            ("@attribute c {a}\n@data\n", 1),
            ("@relation r\n@bogus\n", 2),
            ("@relation r\n@attribute c {a}\n@data\n{0 a}\n", 4),
            ("@relation r\n@attribute x numeric\n@data\n", 3),
        ] {
            match parse_arff(text) {
                Err(DataError::MalformedHeader { line, .. }) => assert_eq!(line, want_line, "{text}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(matches!(parse_arff("@relation r\n@attribute c {a}\n"), Err(DataError::MalformedHeader { .. })));
    }

    #[test]
    fn quoting_comments_and_missing() {
        let text = "% leading comment\n@Relation 'my data'\n@ATTRIBUTE 'Old peak' REAL\n@attribute \"cls\" {'a b', \"c,d\", '?'}\n@DATA\n% inline comment line\n?, 'a b'\n1.5e2,\"c,d\"\n2,'?'\n";
        let ds = parse_arff(text).unwrap();
        assert_eq!(ds.relation(), "my data");
        assert_eq!(ds.schema().attribute(0).name, "Old peak");
        assert_eq!(ds.schema().class_labels(), ["a b", "c,d", "?"]);
        assert_eq!(ds.row(0), &[Value::Missing, Value::Nominal(0)]);
        assert_eq!(ds.row(1), &[Value::Numeric(150.0), Value::Nominal(1)]);
        assert_eq!(ds.row(2), &[Value::Numeric(2.0), Value::Nominal(2)]);
        assert_eq!(parse_arff(&write_arff(&ds)).unwrap(), ds);
    }

    #[test]
    fn explicit_target() {
        let text = "@relation r\n@attribute c {a,b}\n@attribute x numeric\n@data\na,1\n";
        let ds = parse_arff_with_target(text, Some("c")).unwrap();
        assert_eq!(ds.schema().target_index(), 0);
        assert!(parse_arff(text).is_err());
    }

    #[test]
    fn writer_output() {
        let ds = parse_arff(FIXTURE).unwrap();
        let empty = ds.select_rows(&[]);
        let text = write_arff(&empty);
        assert!(text.ends_with("@data\n"));
        assert_eq!(parse_arff(&text).unwrap(), empty);

        let round = parse_arff(&write_arff(&ds)).unwrap();
        assert_eq!(round, ds);

        let mut rows = ds.rows().to_vec();
        rows[0][4] = Value::Missing;
        let with_missing = Dataset::new("heart", ds.schema().clone(), rows).unwrap();
        let text = write_arff(&with_missing);
        assert!(text.contains("63,1,1,145,?,1,2,150,0,2.3,3,0,6,1"));
    }

    #[test]
    fn parse_real_rules() {
        assert_eq!(parse_real("63"), Some(63.0));
        assert_eq!(parse_real("-2.5E-1"), Some(-0.25));
        assert_eq!(parse_real(".5"), Some(0.5));
        assert_eq!(parse_real("1e400"), None);
        assert_eq!(parse_real("infinity"), None);
        assert_eq!(parse_real(""), None);
        assert_eq!(parse_real("1,0"), None);
    }
}
