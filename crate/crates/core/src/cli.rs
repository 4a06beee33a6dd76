//! Command-line front end. Every subcommand is a thin wrapper over library calls.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{load_csv, CsvOptions, LabelAliases, MixedTable, Schema};
use crate::detector::{detect_table, FrodConfig, LabeledScoring};
use crate::error::FrodError;
use crate::eval::{run_experiment, ExperimentConfig, Grid, TieBreak};
use crate::fuzzy_relation::relation_for_attribute;
use crate::golden::{check_worked_example, ReferenceValues, TOLERANCE};
use crate::output::write_detection;
use crate::parallel::{threads_from_env, with_threads};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_LABELS: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "frod",
    version,
    about = "Semi-supervised outlier detection for mixed-attribute tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score the unlabeled rows of a partially labeled CSV.
    Detect(DetectArgs),
    /// Repeated stratified evaluation on a fully labeled CSV.
    Eval(EvalArgs),
    /// Recompute the built-in worked example and compare with reference values.
    Example(ExampleArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Optional schema file with one `name:kind` line per column.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Name of the label column (0 = normal, 1 = outlier, empty = unlabeled).
    #[arg(long = "label-col", default_value = "label")]
    pub label_col: String,
    /// Comma-separated tokens meaning "normal".
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub normal_labels: Vec<String>,
    /// Comma-separated tokens meaning "outlier".
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub outlier_labels: Vec<String>,
    /// Comma-separated tokens meaning "unlabeled" (the empty string is always accepted).
    #[arg(long, value_delimiter = ',')]
    pub unlabeled_labels: Vec<String>,
}

impl InputArgs {
    fn load(&self) -> Result<MixedTable, FrodError> {
        let mut unlabeled = vec![String::new()];
        unlabeled.extend(self.unlabeled_labels.iter().cloned());
        let mut opts = CsvOptions::new(&self.label_col).with_aliases(LabelAliases {
            normal: self.normal_labels.clone(),
            outlier: self.outlier_labels.clone(),
            unlabeled,
        });
        if let Some(path) = &self.schema {
            opts = opts.with_schema(Schema::from_file(path)?);
        }
        Ok(load_csv(&self.input, &opts)?.normalize())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScoringArg {
    /// Score each labeled object inside the unlabeled universe.
    Append,
    /// Score labeled objects within the labeled universe.
    Labeled,
}

impl From<ScoringArg> for LabeledScoring {
    fn from(s: ScoringArg) -> Self {
        match s {
            ScoringArg::Append => LabeledScoring::AppendToUnlabeled,
            ScoringArg::Labeled => LabeledScoring::LabeledUniverse,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TieBreakArg {
    /// Larger threshold margin on the labeled objects, then smaller parameters.
    Margin,
    /// Smaller delta, then smaller beta.
    Smaller,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Margin => TieBreak::Margin,
            TieBreakArg::Smaller => TieBreak::SmallerParameters,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Fixed threshold instead of the greatest labeled-normal score.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "append")]
    pub labeled_scoring: ScoringArg,
    /// Score CSV path; the JSON sidecar is written next to it with `.json` appended.
    #[arg(long, default_value = "frod_scores.csv")]
    pub output: PathBuf,
    /// Directory for binary dumps of the unlabeled relation matrices.
    #[arg(long)]
    pub dump_relations: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long = "labeled-fraction", default_value_t = 0.01)]
    pub labeled_fraction: f64,
    /// Explicit comma-separated seeds; overrides `--runs`.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    /// Number of runs with seeds 0..runs when `--seeds` is absent.
    #[arg(long, default_value_t = 10)]
    pub runs: u64,
    /// Tune delta and beta by grid search on the labeled split.
    #[arg(long)]
    pub grid: bool,
    /// Ordering of grid points with equal labeled AUC.
    #[arg(long, value_enum, default_value = "margin")]
    pub tie_break: TieBreakArg,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value = "append")]
    pub labeled_scoring: ScoringArg,
    /// Include per-run unlabeled scores in the JSON report.
    #[arg(long)]
    pub keep_scores: bool,
    /// JSON report path; printed to stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Dataset name recorded in the report (defaults to the input file stem).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// Print the comparison as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

/// Maps a library error onto the documented exit codes.
pub fn exit_code(err: &FrodError) -> i32 {
    if err.is_degenerate_labels() {
        EXIT_LABELS
    } else if matches!(err, FrodError::Param(_)) {
        EXIT_USAGE
    } else {
        EXIT_DATA
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let threads = threads_from_env();
    let result = match &cli.command {
        Command::Detect(a) => with_threads(threads, || cmd_detect(a)),
        Command::Eval(a) => with_threads(threads, || cmd_eval(a)),
        Command::Example(a) => with_threads(threads, || cmd_example(a)),
    };
    match result {
        Ok(Outcome { stdout, code }) => {
            let _ = out.write_all(stdout.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Outcome {
    stdout: String,
    code: i32,
}

fn cmd_detect(args: &DetectArgs) -> Result<Outcome, FrodError> {
    let mut config =
        FrodConfig::new(args.delta, args.beta).with_labeled_scoring(args.labeled_scoring.into());
    config.threshold_override = args.threshold;
    config.validate()?;
    let table = args.input.load()?;
    let result = detect_table(&table, &config)?;
    let sidecar = write_detection(&args.output, &table, &result)?;
    if let Some(dir) = &args.dump_relations {
        dump_relations(dir, &table, &result.unlabeled, args.delta)?;
    }
    let mut stdout = format!(
        "scored {} unlabeled objects; threshold {:.6}; {} predicted outliers\n",
        result.unlabeled.len(),
        result.threshold,
        result.outliers().len()
    );
    if !result.threshold_in_unit_interval() {
        stdout.push_str("warning: threshold lies outside (0, 1)\n");
    }
    stdout.push_str(&format!(
        "wrote {} and {}\n",
        args.output.display(),
        sidecar.display()
    ));
    Ok(Outcome {
        stdout,
        code: EXIT_OK,
    })
}

fn dump_relations(
    dir: &Path,
    table: &MixedTable,
    subset: &[usize],
    delta: f64,
) -> Result<(), FrodError> {
    std::fs::create_dir_all(dir)?;
    for a in 0..table.n_attributes() {
        let rel = relation_for_attribute(table, a, subset, delta)?;
        let file = std::fs::File::create(dir.join(format!("relation_{a:03}.bin")))?;
        rel.write_dump(std::io::BufWriter::new(file))?;
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<Outcome, FrodError> {
    let seeds: Vec<u64> = if args.seeds.is_empty() {
        (0..args.runs).collect()
    } else {
        args.seeds.clone()
    };
    let grid = if args.grid {
        Grid::standard()
    } else {
        FrodConfig::new(args.delta, args.beta).validate()?;
        Grid::single(args.delta, args.beta)
    };
    let name = args.name.clone().unwrap_or_else(|| {
        args.input
            .input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    let mut config = ExperimentConfig::new(name, args.labeled_fraction, seeds, grid);
    config.labeled_scoring = args.labeled_scoring.into();
    config.tie_break = args.tie_break.into();
    config.keep_scores = args.keep_scores;

    let table = args.input.load()?;
    let report = run_experiment(&table, &config)?;
    let json = serde_json::to_string_pretty(&report)? + "\n";
    let mut stdout = report.to_text_table();
    match &args.output {
        Some(path) => std::fs::write(path, json)?,
        None => stdout.push_str(&json),
    }
    Ok(Outcome {
        stdout,
        code: EXIT_OK,
    })
}

fn cmd_example(args: &ExampleArgs) -> Result<Outcome, FrodError> {
    let checks = check_worked_example(&ReferenceValues::expected(), TOLERANCE)?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    let stdout = if args.json {
        serde_json::to_string_pretty(&checks)? + "\n"
    } else {
        let mut s = format!(
            "{:<24} {:>10} {:>12} {:>6}\n",
            "quantity", "reference", "computed", "ok"
        );
        for c in &checks {
            s.push_str(&format!(
                "{:<24} {:>10.4} {:>12.6} {:>6}\n",
                c.name,
                c.expected,
                c.actual,
                if c.passed { "yes" } else { "NO" }
            ));
        }
        if failed.is_empty() {
            s.push_str(&format!(
                "all {} checks agree within {TOLERANCE}\n",
                checks.len()
            ));
        } else {
            for c in &failed {
                s.push_str(&format!(
                    "mismatch: {} expected {} got {}\n",
                    c.name, c.expected, c.actual
                ));
            }
        }
        s
    };
    Ok(Outcome {
        stdout,
        code: if failed.is_empty() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        },
    })
}
