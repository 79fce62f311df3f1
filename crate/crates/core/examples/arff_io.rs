//! Load the heart fixture from ARFF and CSV, look at it, write it back.
//!
//!     cargo run --example arff_io

use heartml::data::{heart_schema, parse_arff, parse_csv, write_arff, Value};

const ARFF: &str = include_str!("data/heart_fixture.arff");
const CSV: &str = include_str!("data/heart_fixture.csv");
const PERMUTED: &str = include_str!("data/heart_fixture_permuted.csv");
const MISSING: &str = include_str!("data/heart_fixture_missing.arff");

fn main() {
    let ds = parse_arff(ARFF).expect("fixture parses");
    let schema = ds.schema();
    println!("relation {} with {} rows", ds.relation(), ds.len());
    for (i, attr) in schema.attributes().iter().enumerate() {
        let kind = match attr.categories() {
            Some(c) => format!("{{{}}}", c.join(",")),
            None => "numeric".to_string(),
        };
        let mark = if i == schema.target_index() { "  <- class" } else { "" };
        println!("  {:<9} {kind}{mark}", attr.name);
    }

    // CSV columns are matched by header name, so order does not matter
    let from_csv = parse_csv(CSV, &heart_schema()).unwrap();
    let permuted = parse_csv(PERMUTED, &heart_schema()).unwrap();
    assert_eq!(from_csv.rows(), permuted.rows());
    assert_eq!(from_csv.rows(), ds.rows());

    let holes = parse_arff(MISSING).unwrap();
    let names = holes.schema().attributes();
    for (attr, n) in names.iter().zip(holes.missing_counts()) {
        if n > 0 {
            println!("missing in {}: {n}", attr.name);
        }
    }
    assert!(holes.rows().iter().flatten().any(Value::is_missing));

    print!("\n{}", write_arff(&from_csv.with_relation("heart")));

    let bad = CSV.replacen(",1,1,145,", ",1,9,145,", 1);
    match parse_csv(&bad, &heart_schema()) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nrejected: {e}"),
    }
}
