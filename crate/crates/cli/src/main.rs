use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qfid::experiments::{
    run_bound_experiment, run_limit_scaling_check, run_sandwich_check, run_theorem1_check, run_triangle_experiment,
    ExperimentReport, DEFAULT_SEED, DEFAULT_TOL, DEFAULT_TRIALS,
};
use qfid::states::parse_state_json;
use qfid::{Measure, MetricKind, SamplerSpec};

mod report;

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qfid",
    version,
    about = "Bures and A-fidelities, their metrics, and the numerical checks behind them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two state files.
    Fidelity(FidelityArgs),
    /// Run a seeded numerical experiment.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FidelityArgs {
    state_a: PathBuf,
    state_b: PathBuf,
    /// Require both states to have this dimension.
    #[arg(long)]
    dim: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Bound,
    Triangle,
    Theorem1,
    Sandwich,
    Limits,
}

fn measure_parser() -> impl TypedValueParser<Value = Measure> {
    PossibleValuesParser::new(Measure::ALL.map(Measure::name)).map(|s| s.parse::<Measure>().expect("listed name"))
}

fn metric_parser() -> impl TypedValueParser<Value = MetricKind> {
    PossibleValuesParser::new(MetricKind::ALL.map(MetricKind::name))
        .map(|s| s.parse::<MetricKind>().expect("listed name"))
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    /// Hilbert-space dimension (theorem1 and limits need 2).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Trials (pairs or triples; direction pairs for limits).
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random-state measure [default: hs; limits always uses bloch-uniform]
    #[arg(long, value_parser = measure_parser())]
    measure: Option<Measure>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tolerance: f64,
    /// Metric for the triangle experiment.
    #[arg(long, value_parser = metric_parser(), default_value = "a-angle")]
    metric: MetricKind,
    /// Epsilon ladder for the limits experiment, strictly descending.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
    eps: Vec<f64>,
    /// Include wall-clock time in JSON and CSV reports.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(qfid::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<qfid::Error> for CliError {
    fn from(e: qfid::Error) -> Self {
        CliError::Core(e)
    }
}

fn read_state(path: &Path) -> Result<qfid::DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    parse_state_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn emit(output: &OutputArgs, body: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(path.clone(), e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_fidelity(args: &FidelityArgs) -> Result<u8, CliError> {
    let a = read_state(&args.state_a)?;
    let b = read_state(&args.state_b)?;
    if a.dim() != b.dim() {
        return Err(CliError::Usage(format!(
            "dimension mismatch: {} has dim {}, {} has dim {}",
            args.state_a.display(),
            a.dim(),
            args.state_b.display(),
            b.dim()
        )));
    }
    if let Some(d) = args.dim {
        if a.dim() != d {
            return Err(CliError::Usage(format!("states have dim {} but --dim {d} was given", a.dim())));
        }
    }
    let summary = report::FidelitySummary::compute(&a, &b)?;
    emit(&args.output, &summary.render(args.output.format))?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    if !(args.tolerance >= 0.0 && args.tolerance.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tolerance must be a finite non-negative number, got {}",
            args.tolerance
        )));
    }
    let measure = args.measure.unwrap_or(Measure::HilbertSchmidtMixed);
    let spec = || SamplerSpec::new(measure, args.dim, args.seed).map_err(|e| CliError::Usage(e.to_string()));
    let need_qubit = |name: &str| {
        if args.dim != 2 {
            return Err(CliError::Usage(format!("{name} is defined for --dim 2 only, got --dim {}", args.dim)));
        }
        Ok(())
    };
    let report = match args.experiment {
        Experiment::Bound => run_bound_experiment(args.dim, args.trials, &spec()?, args.tolerance)?,
        Experiment::Triangle => run_triangle_experiment(args.metric, args.dim, args.trials, &spec()?, args.tolerance)?,
        Experiment::Theorem1 => {
            need_qubit("theorem1")?;
            run_theorem1_check(args.trials, &spec()?, args.tolerance)?
        }
        Experiment::Sandwich => run_sandwich_check(args.dim, args.trials, &spec()?, args.tolerance)?,
        Experiment::Limits => {
            need_qubit("limits")?;
            if args.measure.is_some_and(|m| m != Measure::BlochBallUniform) {
                return Err(CliError::Usage("limits samples directions with --measure bloch-uniform only".into()));
            }
            run_limit_scaling_check(&args.eps, args.trials, args.seed, args.tolerance)
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let shown: ExperimentReport = if args.timing { report.clone() } else { report.without_timing() };
    emit(&args.output, &report::render_experiment(&shown, args.output.format))?;
    let summary = report.summary();
    if args.output.out.is_some() || args.output.format == Format::Table {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(if report.passed() { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fidelity(args) => cmd_fidelity(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
