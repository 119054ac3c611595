//! `curie`: limit profiles, exact finite-n distances, verification and
//! simulation for Curie–Weiss Glauber dynamics.

mod config;
mod converge;
mod error;
mod output;
mod profile;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "curie", version, about = "Cutoff profiles of Curie-Weiss Glauber dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    /// Seed for simulations; overrides the config.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads; overrides CURIE_THREADS and the config.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Also emit SVG plots where available.
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the limit profile Psi(theta) and its fixed-fraction variant.
    Profile,
    /// Exact finite-n distances against the limit along an n ladder.
    Converge,
    /// Run the invariant suite and write a JSON report.
    Verify,
    /// Monte Carlo marginals and OU moment tables.
    Simulate,
}

const DEFAULT_SEED: u64 = 0x5eed;

fn thread_count(cli: &Cli, cfg: &RunConfig) -> Result<Option<usize>, CliError> {
    if let Some(n) = cli.threads {
        return if n == 0 {
            Err(CliError::Config("--threads must be at least 1".into()))
        } else {
            Ok(Some(n))
        };
    }
    if let Ok(v) = std::env::var("CURIE_THREADS") {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("CURIE_THREADS = {v:?}: expected a positive integer"))),
        };
    }
    Ok(cfg.threads)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = thread_count(&cli, &cfg)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let seed = cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    std::fs::create_dir_all(&cli.out)?;
    let spec = cfg.transient.spec()?;
    match cli.command {
        Command::Profile => profile::run(&cfg.profile, &cli.out),
        Command::Converge => converge::run(&cfg.converge, &spec, &cli.out, cli.svg),
        Command::Verify => verify::run(&cfg.verify, &spec, seed, &cli.out),
        Command::Simulate => simulate::run(&cfg.simulate, seed, &cli.out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
