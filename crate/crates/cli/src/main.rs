//! `xychain` command-line front end: single-pair concurrence, parameter
//! sweeps, figure presets and the self-validation suites. Results go out
//! as CSV.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xychain::figures::figure_preset;
use xychain::sweep::{concurrence_record, run_sweep, write_csv};
use xychain::validate::{run_validation, ValidationOptions, ValidationSize};
use xychain::{ChainSpec, Engine, Error, Execution, PairSelector, SweepMode, SweepRequest, VaryRange};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "xychain", version, about = "Thermal pair entanglement in open alternating XY spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Concurrence of one spin pair.
    Concurrence(ConcurrenceArgs),
    /// Sweep one parameter and write one CSV row per grid point and pair.
    Sweep(SweepArgs),
    /// Write the data for one of the preset figures (ids 1-6).
    Figure(FigureArgs),
    /// Run the oracle-equivalence and closed-form validation suites.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Number of spins.
    #[arg(long)]
    n: usize,
    /// Coupling ratio D2/D1.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Inverse temperature beta*D1/2.
    #[arg(long)]
    tau: Option<f64>,
    /// Larmor frequency on odd sites, in units of D1.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega1: f64,
    /// Larmor frequency on even sites, in units of D1.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega2: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Auto,
    Fastpath,
    Oracle,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Fastpath => Engine::Fastpath,
            EngineArg::Oracle => Engine::Oracle,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VaryArg {
    Temperature,
    Site,
    Delta,
    Length,
}

impl From<VaryArg> for SweepMode {
    fn from(v: VaryArg) -> Self {
        match v {
            VaryArg::Temperature => SweepMode::Temperature,
            VaryArg::Site => SweepMode::Site,
            VaryArg::Delta => SweepMode::Delta,
            VaryArg::Length => SweepMode::Length,
        }
    }
}

#[derive(Args, Debug)]
struct ConcurrenceArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Spin pair `i,j` (1-based, i < j).
    #[arg(long)]
    pair: String,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, value_enum)]
    vary: VaryArg,
    /// `start:stop:count[:log]`; optional for site sweeps.
    #[arg(long)]
    range: Option<String>,
    /// Spin pair `i,j`, or `nn` for every nearest-neighbour bond (default).
    #[arg(long, default_value = "nn")]
    pair: String,
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// Figure number, 1-6.
    id: u8,
    /// Output directory; one CSV per curve.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SizeArg {
    Small,
    Full,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SizeArg::Small)]
    size: SizeArg,
    /// Offset added to the closed-form alpha33 values (failure-path check).
    #[arg(long, hide = true, allow_hyphen_values = true)]
    inject_alpha33_fault: Option<f64>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
    Validation,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence(_) => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

fn chain_spec(args: &ChainArgs, tau_required: bool) -> Result<ChainSpec, CliError> {
    let tau = match args.tau {
        Some(t) => t,
        None if tau_required => return Err(CliError::Usage("--tau is required".into())),
        None => 0.0,
    };
    Ok(ChainSpec::new(args.n, args.omega1, args.omega2, args.delta, tau)?)
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    match s.parse::<PairSelector>()? {
        PairSelector::Explicit(i, j) => Ok((i, j)),
        PairSelector::NearestNeighbors => Err(CliError::Usage("--pair must be i,j here".into())),
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Concurrence(args) => {
            let spec = chain_spec(&args.chain, true)?;
            let (i, j) = parse_pair(&args.pair)?;
            let record = concurrence_record(&spec, i, j, args.engine.into())?;
            let mut out = open_output(args.out.as_deref())?;
            let meta = vec![format!("xychain {}", xychain::VERSION), "mode=concurrence".into()];
            write_csv(&mut out, &meta, &[record])?;
            out.flush()?;
        }
        Command::Sweep(args) => {
            let mode: SweepMode = args.vary.into();
            let base = chain_spec(&args.chain, mode != SweepMode::Temperature)?;
            let range = args.range.as_deref().map(str::parse::<VaryRange>).transpose()?;
            let req = SweepRequest {
                mode,
                base,
                range,
                pairs: args.pair.parse()?,
                engine: args.engine.into(),
            };
            let records = run_sweep(&req, Execution::default())?;
            let mut out = open_output(args.out.as_deref())?;
            write_csv(&mut out, &req.metadata(), &records)?;
            out.flush()?;
        }
        Command::Figure(args) => {
            let curves = figure_preset(args.id)?;
            fs::create_dir_all(&args.out)?;
            for curve in curves {
                let records = run_sweep(&curve.request, Execution::default())?;
                let path = args.out.join(format!("{}.csv", curve.file_stem));
                let mut out = BufWriter::new(File::create(&path)?);
                let mut meta = curve.metadata();
                meta.insert(1, format!("figure {}", args.id));
                write_csv(&mut out, &meta, &records)?;
                out.flush()?;
                eprintln!("wrote {} ({} rows)", path.display(), records.len());
            }
        }
        Command::Validate(args) => {
            let size = match args.size {
                SizeArg::Small => ValidationSize::Small,
                SizeArg::Full => ValidationSize::Full,
            };
            let mut opts = ValidationOptions::new(args.seed, size);
            opts.alpha33_fault = args.inject_alpha33_fault;
            let report = run_validation(&opts);
            print!("{}", report.render());
            if !report.passed() {
                return Err(CliError::Validation);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(CliError::Validation) => ExitCode::from(EXIT_VALIDATION),
    }
}
