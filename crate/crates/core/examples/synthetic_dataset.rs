//! Draw a heart-shaped synthetic dataset from a TOML distribution spec.
//!
//!     cargo run --example synthetic_dataset -- [ROWS] [SEED]

use heartml::data::{generate_synthetic, heart_schema, write_arff, SyntheticSpec};

const SPEC: &str = include_str!("data/heart_synthetic.toml");

fn main() {
    let mut args = std::env::args().skip(1);
    let rows: usize = args.next().map_or(529, |s| s.parse().expect("ROWS is a number"));
    let seed: u64 = args.next().map_or(42, |s| s.parse().expect("SEED is a number"));

    let spec = SyntheticSpec::from_toml(SPEC).unwrap();
    let ds = generate_synthetic(&heart_schema(), rows, seed, &spec).unwrap();
    let labels = ds.schema().class_labels();
    for (label, n) in labels.iter().zip(ds.class_counts()) {
        println!("class {label}: {n}");
    }

    // same seed, same data
    let again = generate_synthetic(&heart_schema(), rows, seed, &spec).unwrap();
    assert_eq!(ds, again);

    let age = ds.schema().index_of("Age").unwrap();
    let ages: Vec<f64> = (0..ds.len()).filter_map(|r| ds.value(r, age).as_f64()).collect();
    let mean = ages.iter().sum::<f64>() / ages.len() as f64;
    println!("mean Age {mean:.1}");

    let text = write_arff(&ds.with_relation("synthetic"));
    println!("{} bytes of ARFF, first data row:", text.len());
    println!("{}", text.lines().skip_while(|l| *l != "@data").nth(1).unwrap_or(""));
}
