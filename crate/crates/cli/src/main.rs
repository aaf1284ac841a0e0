use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stinespring_cli::commands::{self, DiagnoseOptions};
use stinespring_cli::{CliError, GridSpec, Output, Representation, Settings, DEFAULT_SEED};
use stinespring_core::TraceSource;

#[derive(Parser)]
#[command(
    name = "stinespring",
    version,
    about = "Quantum channels, GKSL semigroups and Stinespring curves"
)]
struct Cli {
    /// Numerical tolerance for validation and verification.
    #[arg(long, global = true, env = "STINESPRING_TOL", default_value_t = stinespring_core::DEFAULT_TOL)]
    tol: f64,

    /// Seed for random basis completion and positivity probes.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Exit with status 3 when a verification residual exceeds the tolerance.
    #[arg(long, global = true)]
    verify: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Semigroup,
    StinespringCurve,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a channel file between Choi, Kraus and Stinespring forms.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Representation,
    },
    /// Sample e^{tL} for a Lindblad file and write a trace CSV.
    Evolve {
        input: PathBuf,
        #[arg(long, default_value = "0:5:50")]
        grid: GridSpec,
    },
    /// Build a type-I Stinespring curve matching a Lindblad generator.
    Dilate { input: PathBuf },
    /// Exact derivative of a curve at t = 0.
    Derivatives {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Semigroup law, P-divisibility, bijectivity, recurrence and remainder order.
    Diagnose {
        /// Curve JSON, Lindblad JSON or trace CSV.
        input: PathBuf,
        #[arg(long, default_value = "0:10:1000")]
        grid: GridSpec,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Determinant threshold for bijectivity failures.
        #[arg(long, default_value_t = 1e-6)]
        det_tol: f64,
        /// Source tag of a trace CSV input.
        #[arg(long, value_enum, default_value = "stinespring-curve")]
        source: Source,
        /// Also write the sampled trace as CSV.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Reproduce the qubit dephasing example end to end.
    ExampleQubit,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    if cli.tol.is_nan() || cli.tol <= 0.0 || !cli.tol.is_finite() {
        return Err(CliError::Validation(format!(
            "tolerance must be positive and finite, got {}",
            cli.tol
        )));
    }
    let settings = Settings {
        tol: cli.tol,
        seed: cli.seed,
        verify: cli.verify,
    };
    match &cli.command {
        Command::Convert { input, to } => commands::convert(&read(input)?, *to, &settings),
        Command::Evolve { input, grid } => commands::evolve(&read(input)?, grid, &settings),
        Command::Dilate { input } => commands::dilate(&read(input)?, &settings),
        Command::Derivatives { input, order } => {
            commands::derivatives(&read(input)?, *order, &settings)
        }
        Command::Diagnose {
            input,
            grid,
            epsilon,
            det_tol,
            source,
            trace_out,
        } => {
            let opts = DiagnoseOptions {
                grid: *grid,
                epsilon: *epsilon,
                det_tol: *det_tol,
                csv_source: match source {
                    Source::Semigroup => TraceSource::Semigroup,
                    Source::StinespringCurve => TraceSource::StinespringCurve,
                },
            };
            let out = commands::diagnose(&read(input)?, &opts, &settings)?;
            if let (Some(path), Some(csv)) = (trace_out, &out.trace_csv) {
                write(Some(path), csv)?;
            }
            Ok(out)
        }
        Command::ExampleQubit => commands::example_qubit(&settings),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Validation(e.to_string().trim_end().to_string())),
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    if let Err(e) = write(cli.out.as_deref(), &out.body) {
        return fail(&e);
    }
    if out.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        fail(&CliError::Tolerance(out.failures.join("; ")))
    }
}
