//! `iqc` command-line front-end.
//!
//! Exit codes: 0 success, 1 usage or argument error, 2 input or parse error,
//! 3 qubit cap exceeded. Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::enumeration::{enumerate_solutions, EnumerationConfig};
use crate::error::Error;
use crate::interferometer::interfere_and_measure;
use crate::oracle::{parse_dimacs, parse_truth_table, Oracle};
use crate::report::{self, OutputFormat, RunRecords};
use crate::robustness::{
    grover_shots, sweep, Iterations, NoiseInsertion, NoiseModel, NoiseSpec, SweepConfig,
};
use crate::state::{set_max_qubits, DEFAULT_MAX_QUBITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const MAX_QUBITS_ENV: &str = "IQC_MAX_QUBITS";

#[derive(Parser, Debug)]
#[command(
    name = "iqc",
    version,
    about = "Interference-based quantum search on a statevector simulator",
    after_help = "Environment:\n  IQC_MAX_QUBITS  override the qubit cap (default 24)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct OracleArgs {
    /// Oracle file: DIMACS CNF or a truth table of solution bitstrings
    #[arg(long)]
    oracle: PathBuf,
    /// Oracle file format; inferred from the extension when omitted (.cnf/.dimacs → dimacs, otherwise table)
    #[arg(long, value_enum)]
    oracle_format: Option<OracleFormat>,
    /// Root seed for all randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Repeat single interference runs and print one record per shot
    Run {
        #[command(flatten)]
        common: OracleArgs,
        /// Number of independent runs
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
    },
    /// Find every solution by repeated runs with exclusion
    Enumerate {
        #[command(flatten)]
        common: OracleArgs,
        /// Round budget
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        max_rounds: u64,
        /// Consecutive post-selection failures that end a sampled run
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        streak_limit: u32,
        /// Stop on a failure streak instead of the analytic residual
        #[arg(long)]
        sampled: bool,
    },
    /// Noise sweep of the interference pipeline
    Sweep {
        #[command(flatten)]
        common: OracleArgs,
        /// Noise model
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Comma-separated magnitudes (ε for amplitude, p for bitflip)
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        /// Trials per grid point
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Where the noise acts
        #[arg(long, value_enum, default_value = "after-oracle")]
        insertion: InsertionArg,
    },
    /// Grover search baseline
    Grover {
        #[command(flatten)]
        common: OracleArgs,
        /// Iteration count or "auto" for the textbook optimum
        #[arg(long, default_value = "auto")]
        iterations: String,
        /// Measurements of the final state
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleFormat {
    Dimacs,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Amplitude,
    Bitflip,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InsertionArg {
    AfterSpread,
    AfterOracle,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) => EXIT_INPUT,
            Failure::Resource(_) => EXIT_RESOURCE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Resource(m) => m,
        }
    }

    fn from_error(e: Error, path: &Path) -> Self {
        match e {
            Error::QubitCap { .. } => Failure::Resource(e.to_string()),
            Error::Parse { line, message } => {
                Failure::Input(format!("{}:{line}: {message}", path.display()))
            }
            Error::Argument(_) => Failure::Usage(e.to_string()),
            Error::DimensionMismatch { .. } | Error::StateCorruption { .. } => {
                Failure::Input(e.to_string())
            }
        }
    }
}

/// Process entry point; reads `IQC_MAX_QUBITS` and writes to the real stdout/stderr.
pub fn main<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let env_cap = std::env::var(MAX_QUBITS_ENV).ok();
    run(
        args,
        env_cap.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

pub fn run<I, O, E>(args: I, env_cap: Option<&str>, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = OsString>,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };

    let cap = match env_cap {
        None => DEFAULT_MAX_QUBITS,
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                let _ = writeln!(err, "iqc: invalid {MAX_QUBITS_ENV} value '{v}'");
                return EXIT_USAGE;
            }
        },
    };
    set_max_qubits(cap);

    match execute(cli.command, err) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "iqc: cannot write output: {e}");
                EXIT_INPUT
            }
        },
        Err(f) => {
            let _ = writeln!(err, "iqc: {}", f.message());
            f.code()
        }
    }
}

fn load_oracle(args: &OracleArgs) -> Result<Oracle, Failure> {
    let path = &args.oracle;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let format =
        args.oracle_format
            .unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
                Some("cnf") | Some("dimacs") => OracleFormat::Dimacs,
                _ => OracleFormat::Table,
            });
    let parsed = match format {
        OracleFormat::Dimacs => parse_dimacs(&text).and_then(|f| Oracle::from_cnf(&f)),
        OracleFormat::Table => parse_truth_table(&text),
    };
    parsed.map_err(|e| Failure::from_error(e, path))
}

fn output_format(args: &OracleArgs, default: OutputFormat) -> OutputFormat {
    match args.format {
        None => default,
        Some(Format::Json) => OutputFormat::Json,
        Some(Format::Csv) => OutputFormat::Csv,
    }
}

fn execute<E: Write>(command: Command, err: &mut E) -> Result<String, Failure> {
    match command {
        Command::Run { common, shots } => {
            let o = load_oracle(&common)?;
            let fail = |e| Failure::from_error(e, &common.oracle);
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let outcomes = (0..shots)
                .map(|_| interfere_and_measure(&o, &mut rng))
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            let records = RunRecords {
                n_qubits: o.n_vars(),
                seed: common.seed,
                outcomes,
            };
            Ok(match output_format(&common, OutputFormat::Json) {
                OutputFormat::Json => report::run_json(&records),
                OutputFormat::Csv => report::run_csv(&records),
            })
        }
        Command::Enumerate {
            common,
            max_rounds,
            streak_limit,
            sampled,
        } => {
            let o = load_oracle(&common)?;
            let cfg = EnumerationConfig {
                max_rounds,
                failure_streak_limit: streak_limit,
                exact_mode: !sampled,
                seed: common.seed,
            };
            let rep = enumerate_solutions(&o, &cfg)
                .map_err(|e| Failure::from_error(e, &common.oracle))?;
            Ok(match output_format(&common, OutputFormat::Json) {
                OutputFormat::Json => report::enumeration_json(&rep),
                OutputFormat::Csv => report::enumeration_csv(&rep),
            })
        }
        Command::Sweep {
            common,
            model,
            grid,
            trials,
            insertion,
        } => {
            let o = load_oracle(&common)?;
            let model = match model {
                ModelArg::Amplitude => NoiseModel::Amplitude,
                ModelArg::Bitflip => NoiseModel::BitFlip,
            };
            let grid = grid
                .iter()
                .map(|&m| NoiseSpec::new(model, m))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let cfg = SweepConfig {
                trials,
                seed: common.seed,
                insertion: match insertion {
                    InsertionArg::AfterSpread => NoiseInsertion::AfterSpread,
                    InsertionArg::AfterOracle => NoiseInsertion::AfterOracle,
                },
            };
            let result =
                sweep(&o, &grid, &cfg).map_err(|e| Failure::from_error(e, &common.oracle))?;
            Ok(match output_format(&common, OutputFormat::Csv) {
                OutputFormat::Csv => {
                    // the CSV schema has no seed column
                    let _ = writeln!(
                        err,
                        "iqc: sweep seed={} insertion={}",
                        cfg.seed, cfg.insertion
                    );
                    report::sweep_csv(&result)
                }
                OutputFormat::Json => report::sweep_json(&result, o.n_vars()),
            })
        }
        Command::Grover {
            common,
            iterations,
            shots,
        } => {
            let o = load_oracle(&common)?;
            let iterations = match iterations.as_str() {
                "auto" => Iterations::Auto,
                k => Iterations::Fixed(k.parse().map_err(|_| {
                    Failure::Usage(format!("--iterations expects a count or 'auto', got '{k}'"))
                })?),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let result = grover_shots(&o, iterations, shots, &mut rng)
                .map_err(|e| Failure::from_error(e, &common.oracle))?;
            Ok(match output_format(&common, OutputFormat::Json) {
                OutputFormat::Json => report::grover_json(&result, o.n_vars(), common.seed),
                OutputFormat::Csv => report::grover_csv(&result, &o),
            })
        }
    }
}
