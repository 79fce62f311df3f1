//! Naive Bayes on the synthetic heart data: look inside the model, then
//! classify the three fixture patients.
//!
//!     cargo run --example naive_bayes

use heartml::classifiers::{nb_predict, nb_train, NbParams};
use heartml::data::parse_arff;

const TRAIN: &str = include_str!("data/heart_synthetic_529.arff");
const PATIENTS: &str = include_str!("data/heart_fixture_missing.arff");

fn main() {
    let ds = parse_arff(TRAIN).unwrap();
    let model = nb_train(&ds, &NbParams::default()).unwrap();
    let schema = ds.schema();
    let labels = schema.class_labels();

    println!("priors {:?}", model.priors());
    let age = schema.index_of("Age").unwrap();
    let cp = schema.index_of("Cp").unwrap();
    for (c, label) in labels.iter().enumerate() {
        let (mean, sd) = model.gaussian(age, c).unwrap();
        println!("class {label}: Age ~ N({mean:.1}, {sd:.1})");
        let cats = schema.attribute(cp).categories().unwrap();
        let probs: Vec<String> = (0..cats.len())
            .map(|k| format!("{}={:.3}", cats[k], model.category_probability(cp, c, k).unwrap()))
            .collect();
        println!("         P(Cp | class) {}", probs.join(" "));
    }

    // missing cells are left out of the product
    let patients = parse_arff(PATIENTS).unwrap();
    for (i, row) in patients.rows().iter().enumerate() {
        let p = nb_predict(&model, row).unwrap();
        let best = p.argmax().0;
        println!(
            "patient {}: P(1) = {:.3}, predicted {}, actual {}",
            i + 1,
            p.probability(1),
            labels[best],
            patients.class_of(i).map_or("?", |c| labels[c].as_str())
        );
    }

    let smoother = nb_train(&ds, &NbParams { smoothing: 5.0 }).unwrap();
    let p = nb_predict(&smoother, patients.row(0)).unwrap();
    println!("with smoothing 5: P(1) = {:.3}", p.probability(1));
}
