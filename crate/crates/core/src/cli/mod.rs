//! `heartml` command line.
//!
//! Exit codes: 0 success, 2 input not found, 3 parse or validation
//! failure, 4 configuration error, 5 training or output failure.

mod commands;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifiers::{ClassifierError, ClassifierSpec, ForestParams, NbParams, TreeParams};
use crate::data::DataError;
use crate::eval::EvalError;
use crate::experiment::{ExperimentError, FeatureMode, ReportFormat};
use crate::selection::Discretization;

pub use self::commands::{load_dataset, resolve_schema};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "HEARTML_OUTPUT_DIR";

#[derive(Debug)]
pub enum CliError {
    NotFound(PathBuf),
    Io { path: PathBuf, source: std::io::Error },
    Data { path: PathBuf, source: DataError },
    Config(String),
    Invalid(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotFound(_) => 2,
            CliError::Data { .. } | CliError::Invalid(_) => 3,
            CliError::Config(_) => 4,
            CliError::Io { .. } | CliError::Runtime(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::NotFound(p) => write!(f, "{}: file not found", p.display()),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Data { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Config(m) | CliError::Invalid(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::InvalidParameter(_) => CliError::Config(e.to_string()),
            ClassifierError::SchemaMismatch(_) | ClassifierError::ModelFormat(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Fold { ref source, .. } => match source {
                ClassifierError::InvalidParameter(_) => CliError::Config(e.to_string()),
                _ => CliError::Runtime(e.to_string()),
            },
            EvalError::MissingTarget(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Eval(e) => e.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "heartml", version, about = "Heart-disease classification experiments")]
pub struct Cli {
    /// Worker threads (defaults to the number of CPUs). Results do not
    /// depend on this value.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print attributes, class balance and missing values.
    Inspect(InputArgs),
    /// Convert a CSV file to ARFF.
    Convert(ConvertArgs),
    /// Run CFS feature selection.
    Select(SelectArgs),
    /// Train a model on the whole dataset.
    Train(TrainArgs),
    /// Apply a saved model.
    Predict(PredictArgs),
    /// Cross-validate one classifier.
    Evaluate(EvaluateArgs),
    /// Cross-validate every classifier on every feature set.
    Experiment(ExperimentArgs),
    /// Generate a synthetic dataset from a distribution spec.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// ARFF or CSV file.
    pub input: PathBuf,
    /// Schema for CSV input: `heart` or an ARFF file whose header is used.
    #[arg(long, default_value = "heart")]
    pub schema: String,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CfsArgs {
    /// Discretization of numeric features: `mdl` or `equal-frequency:K`.
    #[arg(long, default_value = "mdl")]
    pub bins: Discretization,
    /// Non-improving expansions before the subset search stops.
    #[arg(long, default_value_t = 5)]
    pub max_stale: usize,
}

impl CfsArgs {
    pub fn config(&self) -> crate::selection::CfsConfig {
        crate::selection::CfsConfig {
            discretization: self.bins,
            max_stale: self.max_stale,
        }
    }
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[command(flatten)]
    pub cfs: CfsArgs,
    /// Write the subset as JSON here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifierKind {
    Nb,
    J48,
    Rf,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Number of forest trees.
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Features tried per forest split (default floor(log2 M) + 1).
    #[arg(long)]
    pub k_per_split: Option<usize>,
    /// Pruning confidence factor.
    #[arg(long, default_value_t = 0.25)]
    pub cf: f64,
    /// Minimum instances per branch (default 2 for j48, 1 for rf).
    #[arg(long)]
    pub min_leaf: Option<usize>,
    /// Grow the j48 tree without pruning.
    #[arg(long)]
    pub no_prune: bool,
    /// Split even when every candidate split has zero gain.
    #[arg(long)]
    pub allow_zero_gain_splits: bool,
    /// Naive Bayes category smoothing.
    #[arg(long, default_value_t = 1.0)]
    pub smoothing: f64,
    /// Seed for folds and forests.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

impl ModelArgs {
    pub fn spec(&self, kind: ClassifierKind) -> ClassifierSpec {
        match kind {
            ClassifierKind::Nb => ClassifierSpec::NaiveBayes(NbParams {
                smoothing: self.smoothing,
            }),
            ClassifierKind::J48 => ClassifierSpec::J48(TreeParams {
                min_leaf: self.min_leaf.unwrap_or(2),
                confidence: self.cf,
                prune: !self.no_prune,
                allow_zero_gain_splits: self.allow_zero_gain_splits,
            }),
            ClassifierKind::Rf => ClassifierSpec::RandomForest(ForestParams {
                trees: self.trees,
                k_per_split: self.k_per_split,
                seed: self.seed,
                min_leaf: self.min_leaf.unwrap_or(1),
                bootstrap: true,
                allow_zero_gain_splits: self.allow_zero_gain_splits,
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long, value_enum)]
    pub classifier: ClassifierKind,
    /// `all`, `cfs` or `explicit:A,B,...`.
    #[arg(long, default_value = "all")]
    pub features: FeatureMode,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub cfs: CfsArgs,
    /// Model file to write.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also print the tree (j48 only).
    #[arg(long)]
    pub print_tree: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long)]
    pub model: PathBuf,
    /// CSV output; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long, value_enum)]
    pub classifier: ClassifierKind,
    #[arg(long, default_value = "all")]
    pub features: FeatureMode,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub cfs: CfsArgs,
    /// Directory for report files; only the text report is printed when absent.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "text,csv,json")]
    pub formats: Vec<ReportFormat>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub data: InputArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "nb,j48,rf")]
    pub classifiers: Vec<ClassifierKind>,
    /// Repeatable: `all`, `cfs` or `explicit:A,B,...`.
    #[arg(long = "feature-mode", default_values = ["all", "cfs"])]
    pub feature_modes: Vec<FeatureMode>,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub cfs: CfsArgs,
    #[arg(long, env = OUTPUT_DIR_ENV, default_value = "heartml-out")]
    pub output_dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "text,csv,json")]
    pub formats: Vec<ReportFormat>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Distribution spec (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 529)]
    pub rows: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// `heart` or an ARFF file whose header gives the attributes.
    #[arg(long, default_value = "heart")]
    pub schema: String,
    #[arg(short, long)]
    pub output: PathBuf,
}

/// Parses `args` and runs the command, writing to standard output.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    let mut stdout = std::io::stdout();
    match execute(&cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Runs a parsed command, sending its normal output to `out`.
pub fn execute(cli: &Cli, out: &mut (dyn std::io::Write + Send)) -> Result<(), CliError> {
    match cli.jobs {
        Some(0) => Err(CliError::Config("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(|| commands::dispatch(&cli.command, out)),
        None => commands::dispatch(&cli.command, out),
    }
}
