use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use opspace::kernel::QuadRule;
use opspace_cli::{CliError, CommandKind, KernelInput, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "opspace",
    version,
    about = "Hilbert-space operator analysis of discretized integral kernels",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the quadrature-weighted spaces of a kernel operator
    Validate(CommonArgs),
    /// Hilbert-Schmidt norm by all four summation routes
    Hsnorm(CommonArgs),
    /// Keep the top-left k x k block and certify the dropped tail
    Truncate(CommonArgs),
    /// Hermitian eigendecomposition by deflation (square kernels only)
    Eig(CommonArgs),
    /// Singular-value decomposition
    Svd(CommonArgs),
    /// Best-coupled communication channels of a Green's-function kernel
    Channels(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Kernel sample file (KERNEL v1 format)
    #[arg(long, conflicts_with_all = ["wavenumber", "source", "receiver"])]
    input: Option<PathBuf>,

    /// Wavenumber of the built-in 1D Helmholtz kernel
    #[arg(long)]
    wavenumber: Option<f64>,

    /// Source interval, two values: LO HI
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    source: Option<Vec<f64>>,

    /// Receiver interval, two values: LO HI
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    receiver: Option<Vec<f64>>,

    /// Points per side for the built-in kernel grids
    #[arg(long, default_value_t = 32)]
    points: usize,

    /// Quadrature rule: midpoint or trapezoid
    #[arg(long, default_value = "midpoint")]
    rule: String,

    /// Spectrum size / kept block size, depending on the command
    #[arg(long, default_value_t = 8)]
    k: usize,

    /// Relative tolerance for iterative solvers and cutoffs
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Seed for the deterministic iteration start vectors
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output format: json or csv (csv for spectra only)
    #[arg(long, default_value = "json")]
    format: String,

    /// Write the document here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

fn to_config(
    kind: CommandKind,
    args: &CommonArgs,
) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    let input = if let Some(path) = &args.input {
        KernelInput::File(path.clone())
    } else {
        let wavenumber = args.wavenumber.ok_or_else(|| {
            CliError::Usage(
                "either --input or --wavenumber with --source/--receiver is required".into(),
            )
        })?;
        let source = args.source.as_ref().ok_or_else(|| {
            CliError::Usage("--source LO HI is required for the built-in kernel".into())
        })?;
        let receiver = args.receiver.as_ref().ok_or_else(|| {
            CliError::Usage("--receiver LO HI is required for the built-in kernel".into())
        })?;
        let rule = QuadRule::parse(&args.rule)
            .ok_or_else(|| CliError::Usage(format!("unknown rule '{}'", args.rule)))?;
        KernelInput::Helmholtz {
            wavenumber,
            source: (source[0], source[1]),
            receiver: (receiver[0], receiver[1]),
            points: args.points,
            rule,
        }
    };
    let format = match args.format.as_str() {
        "json" => OutputFormat::Json,
        "csv" => OutputFormat::Csv,
        other => return Err(CliError::Usage(format!("unknown format '{other}'"))),
    };
    Ok((
        RunConfig {
            command: kind,
            input,
            k: args.k,
            tol: args.tol,
            seed: args.seed,
            format,
        },
        args.output.clone(),
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // keep the diagnostic to one line; clap's exit code would
            // collide with the check-failure status
            let text = err.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(1);
        }
    };

    let (kind, args) = match &cli.command {
        Command::Validate(a) => (CommandKind::Validate, a),
        Command::Hsnorm(a) => (CommandKind::HsNorm, a),
        Command::Truncate(a) => (CommandKind::Truncate, a),
        Command::Eig(a) => (CommandKind::Eig, a),
        Command::Svd(a) => (CommandKind::Svd, a),
        Command::Channels(a) => (CommandKind::Channels, a),
    };

    let started = Instant::now();
    let (config, output) = match to_config(kind, args) {
        Ok(pair) => pair,
        Err(err) => {
            eprintln!("{err}");
            return ExitCode::from(1);
        }
    };

    match opspace_cli::run(&config) {
        Ok(outcome) => {
            if let Some(path) = output {
                if let Err(err) = std::fs::write(&path, outcome.rendered.as_bytes()) {
                    eprintln!("cannot write {}: {err}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(outcome.rendered.as_bytes()).is_err() {
                    return ExitCode::from(1);
                }
            }
            // timing stays on the diagnostic stream so documents are
            // byte-identical across runs
            eprintln!("wall_time_ms {}", started.elapsed().as_millis());
            if outcome.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(1)
        }
    }
}
