use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::classifiers::{Classifier, Learner, ModelFile, TrainedModel};
use crate::data::{generate_synthetic, heart_schema, parse_arff, parse_csv, write_arff, Dataset, Schema, SyntheticSpec, Value};
use crate::eval::make_cv_plan;
use crate::experiment::{resolve_features, run_cell, run_grid, write_grid_reports};
use crate::selection::select_features;

use super::{
    CliError, Command, ConvertArgs, EvaluateArgs, ExperimentArgs, GenerateArgs, InputArgs, PredictArgs, SelectArgs,
    TrainArgs,
};

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::NotFound(path.to_owned()),
        _ => CliError::Io {
            path: path.to_owned(),
            source: e,
        },
    })
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_owned(),
            source,
        })?;
    }
    std::fs::write(path, body).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

/// `heart` gives the built-in schema; anything else is read as an ARFF
/// file whose header supplies the schema and relation name.
pub fn resolve_schema(spec: &str) -> Result<(String, Schema), CliError> {
    if spec == "heart" {
        return Ok(("heart".into(), heart_schema()));
    }
    let path = Path::new(spec);
    let ds = parse_arff(&read_file(path)?).map_err(|source| CliError::Data {
        path: path.to_owned(),
        source,
    })?;
    Ok((ds.relation().to_owned(), ds.schema().clone()))
}

/// Reads ARFF, or CSV (by extension) against the schema named by `schema`.
pub fn load_dataset(path: &Path, schema: &str) -> Result<Dataset, CliError> {
    let text = read_file(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let parsed = if is_csv {
        let (relation, schema) = resolve_schema(schema)?;
        parse_csv(&text, &schema).map(|d| d.with_relation(relation))
    } else {
        parse_arff(&text)
    };
    parsed.map_err(|source| CliError::Data {
        path: path.to_owned(),
        source,
    })
}

fn load(args: &InputArgs) -> Result<Dataset, CliError> {
    load_dataset(&args.input, &args.schema)
}

pub(super) fn dispatch(cmd: &Command, out: &mut (dyn Write + Send)) -> Result<(), CliError> {
    match cmd {
        Command::Inspect(a) => inspect(a, out),
        Command::Convert(a) => convert(a, out),
        Command::Select(a) => select(a, out),
        Command::Train(a) => train(a, out),
        Command::Predict(a) => predict(a, out),
        Command::Evaluate(a) => evaluate(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::Generate(a) => generate(a, out),
    }
}

fn inspect(args: &InputArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(args)?;
    let schema = ds.schema();
    let missing = ds.missing_counts();
    let mut text = format!(
        "Relation: {}\nInstances: {}\nAttributes: {}\n\n",
        ds.relation(),
        ds.len(),
        schema.len()
    );
    let width = schema.attributes().iter().map(|a| a.name.len()).max().unwrap_or(4).max(4);
    text += &format!("{:>3}  {:<width$}  {:<20}  {:<7}  {:>7}\n", "#", "Name", "Type", "Role", "Missing");
    for (i, a) in schema.attributes().iter().enumerate() {
        let kind = match a.categories() {
            Some(c) => format!("{{{}}}", c.join(",")),
            None => "numeric".into(),
        };
        let role = if i == schema.target_index() { "class" } else { "feature" };
        text += &format!("{:>3}  {:<width$}  {kind:<20}  {role:<7}  {:>7}\n", i + 1, a.name, missing[i]);
    }
    text += &format!("\nClass distribution ({}):\n", schema.target().name);
    for (label, n) in schema.class_labels().iter().zip(ds.class_counts()) {
        text += &format!("  {label}: {n}\n");
    }
    let total_missing: usize = missing.iter().sum();
    text += &format!("Missing values: {total_missing}\n");
    out.write_all(text.as_bytes()).map_err(out_err)
}

fn convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(&args.data)?;
    write_file(&args.output, &write_arff(&ds))?;
    writeln!(out, "wrote {} instances to {}", ds.len(), args.output.display()).map_err(out_err)
}

#[derive(Serialize)]
struct SubsetFile<'a> {
    attributes: &'a [String],
    merit: f64,
}

fn select(args: &SelectArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(&args.data)?;
    let sel = select_features(&ds, &args.cfs.config());
    writeln!(
        out,
        "Selected {} of {} features (merit {:.4}):\n  {}",
        sel.attributes.len(),
        ds.schema().feature_indices().len(),
        sel.merit,
        sel.attributes.join(", ")
    )
    .map_err(out_err)?;
    if let Some(path) = &args.output {
        let body = serde_json::to_string_pretty(&SubsetFile {
            attributes: &sel.attributes,
            merit: sel.merit,
        })
        .expect("subset serializes");
        write_file(path, &(body + "\n"))?;
    }
    Ok(())
}

fn train(args: &TrainArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(&args.data)?;
    let (features, info) = resolve_features(&ds, &args.features, &args.cfs.config())?;
    let view = ds.project(&features);
    let spec = args.model.spec(args.classifier);
    let model = spec.fit(&view)?;
    write_file(&args.output, &ModelFile::new(model.clone()).to_json())?;
    writeln!(
        out,
        "trained {} on {} instances with {} features: {}",
        spec.name(),
        view.len(),
        info.attributes.len(),
        info.attributes.join(", ")
    )
    .map_err(out_err)?;
    if let (true, TrainedModel::DecisionTree(tree)) = (args.print_tree, &model) {
        write!(
            out,
            "\n{}\nNumber of leaves: {}\nSize of the tree: {}\n",
            tree.render(),
            tree.num_leaves(),
            tree.num_nodes()
        )
        .map_err(out_err)?;
    }
    Ok(())
}

fn predict(args: &PredictArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(&args.data)?;
    let file = ModelFile::from_json(&read_file(&args.model)?)?;
    let model_schema = file.model.schema();
    let mut keep = Vec::new();
    for attr in model_schema.attributes() {
        let i = ds
            .schema()
            .index_of(&attr.name)
            .ok_or_else(|| CliError::Invalid(format!("input has no attribute `{}` required by the model", attr.name)))?;
        if attr.name != model_schema.target().name {
            keep.push(i);
        }
    }
    keep.sort_unstable();
    let view = ds.project(&keep);
    file.check_schema(view.schema())?;

    let labels = model_schema.class_labels();
    let mut csv = String::from("row,actual,predicted");
    for l in labels {
        csv += &format!(",p_{l}");
    }
    csv.push('\n');
    for r in 0..view.len() {
        let dist = file.model.predict(view.row(r))?;
        let actual = match view.value(r, view.schema().target_index()) {
            Value::Nominal(c) => labels[c].as_str(),
            _ => "",
        };
        csv += &format!("{},{actual},{}", r + 1, labels[dist.argmax().0]);
        for p in dist.probabilities() {
            csv += &format!(",{p}");
        }
        csv.push('\n');
    }
    match &args.output {
        Some(path) => write_file(path, &csv),
        None => out.write_all(csv.as_bytes()).map_err(out_err),
    }
}

fn evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(&args.data)?;
    let plan = make_cv_plan(&ds, args.folds, args.model.seed)?;
    let (features, info) = resolve_features(&ds, &args.features, &args.cfs.config())?;
    let spec = args.model.spec(args.classifier);
    let report = run_cell(&ds, &spec, &features, &info, &plan)?;
    out.write_all(report.to_text().as_bytes()).map_err(out_err)?;
    if let Some(dir) = &args.output_dir {
        for f in &args.formats {
            let name = format!("{}-{}.{}", spec.key(), args.features.key(), f.extension());
            write_file(&dir.join(name), &f.render(&report))?;
        }
    }
    Ok(())
}

fn experiment(args: &ExperimentArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ds = load(&args.data)?;
    let specs: Vec<_> = args.classifiers.iter().map(|&k| args.model.spec(k)).collect();
    let cells = run_grid(&ds, &specs, &args.feature_modes, args.folds, args.model.seed, &args.cfs.config())?;
    write_grid_reports(&args.output_dir, &cells, &args.formats).map_err(|source| CliError::Io {
        path: args.output_dir.clone(),
        source,
    })?;
    let summary = read_file(&args.output_dir.join("summary.txt"))?;
    out.write_all(summary.as_bytes()).map_err(out_err)?;
    writeln!(out, "\nreports written to {}", args.output_dir.display()).map_err(out_err)?;
    let failed: Vec<_> = cells.iter().filter(|c| c.result.is_err()).collect();
    for c in &failed {
        if let Err(e) = &c.result {
            eprintln!("cell {} failed: {e}", c.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("{} of {} cells failed", failed.len(), cells.len())))
    }
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let data_err = |path: &Path| {
        let path = path.to_owned();
        move |source| CliError::Data { path, source }
    };
    let spec = SyntheticSpec::from_toml(&read_file(&args.spec)?).map_err(data_err(&args.spec))?;
    let (_, schema) = resolve_schema(&args.schema)?;
    let ds = generate_synthetic(&schema, args.rows, args.seed, &spec).map_err(data_err(&args.spec))?;
    write_file(&args.output, &write_arff(&ds))?;
    writeln!(out, "wrote {} instances to {}", ds.len(), args.output.display()).map_err(out_err)
}
