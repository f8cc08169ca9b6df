//! `hypoexp`: hypoexponential CDF by exact routes and importance sampling.
//!
//! Exit status: 0 on success (including catastrophic exact results, which are
//! reported, not refused), 2 on malformed input, 3 on I/O failure.

mod commands;
mod rates;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypoexp_core::{validate_problem, HypoexpProblem, DEFAULT_DIGITS};

use commands::Report;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "invalid input: {msg}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hypoexp", version, about = "CDF of sums of independent exponentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed form and matrix-exponential routes with stability diagnostics.
    Exact(ProblemArgs),
    /// Importance-sampling estimate over K independent runs.
    Estimate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Second-moment and relative-error bounds of the estimator.
    Bound {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Sample size per run [default: 100 n].
        #[arg(long = "N", visible_alias = "samples")]
        sample_size: Option<u64>,
    },
    /// Comparison tables for the three built-in models.
    Bench {
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reference value: Poisson tail for identical rates, extended precision otherwise.
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Decimal digits of working precision.
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
    },
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Comma-separated rates; `0.03x10` repeats a value.
    #[arg(long, conflicts_with = "rates_file", required_unless_present = "rates_file")]
    rates: Option<String>,
    /// File with one rate per line (`#` comments allowed).
    #[arg(long)]
    rates_file: Option<PathBuf>,
    /// Threshold t in P(sum X_i <= t).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    /// Also write the parsed rates to this file.
    #[arg(long)]
    dump_rates: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Sample size per run [default: 100 n].
    #[arg(long = "N", visible_alias = "samples")]
    sample_size: Option<u64>,
    /// Number of independent runs.
    #[arg(long = "K", visible_alias = "runs", default_value_t = 10)]
    runs: usize,
    /// Master seed; run k uses stream k.
    #[arg(long, env = "HYPOEXP_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Write the report here instead of stdout. Relative paths resolve under
    /// $HYPOEXP_OUTPUT_DIR when it is set.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl ProblemArgs {
    fn load(&self) -> Result<HypoexpProblem, CliError> {
        let rates = match (&self.rates, &self.rates_file) {
            (Some(list), None) => rates::parse_inline(list)?,
            (None, Some(path)) => rates::read_file(path)?,
            _ => return Err(CliError::Input("give exactly one of --rates or --rates-file".into())),
        };
        let problem = validate_problem(&rates, self.t).map_err(|e| CliError::Input(e.to_string()))?;
        if let Some(path) = &self.dump_rates {
            std::fs::write(path, rates::render_file(&rates))
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        }
        Ok(problem)
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os("HYPOEXP_OUTPUT_DIR") {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(report: Report, output: &OutputArgs) -> Result<(), CliError> {
    if !report.stderr.is_empty() {
        eprint!("{}", report.stderr);
    }
    match &output.output {
        Some(path) => {
            let path = resolve_output(path);
            std::fs::write(&path, report.stdout)
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(report.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact(args) => {
            let problem = args.load()?;
            emit(commands::cmd_exact(&problem, args.output.format)?, &args.output)
        }
        Command::Estimate { problem: args, sampling } => {
            let problem = args.load()?;
            let n = sampling.sample_size.unwrap_or(100 * problem.n() as u64);
            let report = commands::cmd_estimate(&problem, n, sampling.runs, sampling.seed, args.output.format)?;
            emit(report, &args.output)
        }
        Command::Bound { problem: args, sample_size } => {
            let problem = args.load()?;
            let n = sample_size.unwrap_or(100 * problem.n() as u64);
            emit(commands::cmd_bound(&problem, n, args.output.format)?, &args.output)
        }
        Command::Bench { sampling, output } => {
            let report = commands::cmd_bench(sampling.sample_size, sampling.runs, sampling.seed, output.format)?;
            emit(report, &output)
        }
        Command::Oracle { problem: args, digits } => {
            let problem = args.load()?;
            emit(commands::cmd_oracle(&problem, digits, args.output.format)?, &args.output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("hypoexp: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
