use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use commands::{channel, entangle, network, oracle, teleport, Context, Format};
use config::ConfigFile;
use error::CliError;

/// Gaussian states, teleportation fidelities and assisted network optimization.
#[derive(Parser, Debug)]
#[command(name = "gaussnet", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweeps and grid quadratures [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Relative asymmetry accepted in covariance matrices read from files.
    #[arg(long, global = true)]
    symmetry_tol: Option<f64>,
    /// Slack of the bona fide check for covariance matrices read from files.
    #[arg(long, global = true)]
    invariant_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build channel states.
    #[command(subcommand)]
    Channel(channel::ChannelCommand),
    /// Entanglement measures of two-mode states.
    #[command(subcommand)]
    Entangle(entangle::EntangleCommand),
    /// Teleportation fidelity through two-mode channels.
    #[command(subcommand)]
    Teleport(teleport::TeleportCommand),
    /// Measurement-assisted teleportation in three-mode networks.
    #[command(subcommand)]
    Network(network::NetworkCommand),
    /// Phase-space quadrature and Monte Carlo cross-checks.
    #[command(subcommand)]
    Oracle(oracle::OracleCommand),
}

fn context(global: GlobalArgs) -> Result<Context, CliError> {
    let file = match &global.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let defaults = gaussnet::Tolerances::default();
    let tolerances = gaussnet::Tolerances {
        symmetry: file.resolve(global.symmetry_tol, "symmetry-tol", defaults.symmetry)?,
        invariant: file.resolve(global.invariant_tol, "invariant-tol", defaults.invariant)?,
        ..defaults
    };
    let jobs = match global.jobs {
        Some(j) => Some(j),
        None => file.get("jobs")?,
    };
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(Context {
        format: global.format.map_or_else(|| file.get("format"), |f| Ok(Some(f)))?,
        out: global.out.or(file.get("out")?),
        seed: file.resolve(global.seed, "seed", 0)?,
        jobs,
        tolerances,
        file,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = context(cli.global)?;
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = ctx.jobs {
            builder = builder.num_threads(j);
        }
        builder
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", ctx.jobs.unwrap_or(0))))?
    };
    pool.install(|| match cli.command {
        Command::Channel(c) => channel::run(c, &ctx),
        Command::Entangle(c) => entangle::run(c, &ctx),
        Command::Teleport(c) => teleport::run(c, &ctx),
        Command::Network(c) => network::run(c, &ctx),
        Command::Oracle(c) => oracle::run(c, &ctx),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
