//! `qeraser` command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 self-check failure,
//! 1 anything else (I/O).

pub mod config;
pub mod run;
pub mod selftest;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_config, ConfigError, Experiment, ExperimentConfig};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SELF_CHECK: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "qeraser", version, about = "Delayed-choice quantum eraser simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a configuration (and its sweep, if it has one)
    Simulate(RunArgs),
    /// Run a configuration that must contain a sweep block
    Sweep(RunArgs),
    /// CHSH correlators; optimal settings unless a chsh config is given
    Chsh(ChshArgs),
    /// Check a configuration without running it
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in invariant suites
    Selftest,
}

#[derive(Debug, Args)]
struct Output {
    /// Write CSV here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the configured seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured shot count
    #[arg(long)]
    shots: Option<u64>,
    /// Omit the leading `# generated` comment line
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ChshArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Config(ConfigError),
    Io(io::Error),
    Other(String),
}

fn config_error(msg: String) -> Failure {
    Failure::Config(ConfigError { violations: vec![msg] })
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(Failure::Config)
}

fn execute(mut cfg: ExperimentConfig, out: &Output) -> Result<bool, Failure> {
    if let Some(seed) = out.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = out.shots {
        cfg.shots = shots;
    }
    let table = run::run(&cfg).map_err(|e| Failure::Other(e.to_string()))?;
    match &out.out {
        Some(path) => {
            let f = File::create(path).map_err(Failure::Io)?;
            let mut w = BufWriter::new(f);
            run::write_csv(&table, &mut w, !out.no_timestamp).map_err(Failure::Io)?;
            w.flush().map_err(Failure::Io)?;
        }
        None => {
            let stdout = io::stdout();
            run::write_csv(&table, stdout.lock(), !out.no_timestamp).map_err(Failure::Io)?;
        }
    }
    for f in &table.failures {
        eprintln!("self-check failed: {f}");
    }
    Ok(table.failures.is_empty())
}

fn dispatch(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Simulate(a) => execute(load(&a.config)?, &a.output),
        Command::Sweep(a) => {
            let cfg = load(&a.config)?;
            if cfg.sweep.is_none() {
                return Err(config_error(format!(
                    "{}: the sweep command needs a \"sweep\" block",
                    a.config.display()
                )));
            }
            execute(cfg, &a.output)
        }
        Command::Chsh(a) => {
            let cfg = match &a.config {
                Some(p) => load(p)?,
                None => ExperimentConfig::new(Experiment::Chsh),
            };
            if cfg.experiment != Experiment::Chsh {
                return Err(config_error(format!(
                    "the chsh command needs experiment \"chsh\", got \"{}\"",
                    cfg.experiment.name()
                )));
            }
            execute(cfg, &a.output)
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!("{}: ok ({})", config.display(), cfg.experiment.name());
            Ok(true)
        }
        Command::Selftest => {
            let mut ok = true;
            for r in selftest::run_all() {
                match r.outcome {
                    Ok(()) => println!("PASS  {}", r.name),
                    Err(e) => {
                        ok = false;
                        println!("FAIL  {}: {e}", r.name);
                    }
                }
            }
            Ok(ok)
        }
    }
}

/// Parse arguments from the environment, run, and map the result to an
/// exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_SELF_CHECK),
        Err(Failure::Config(e)) => {
            eprintln!("configuration error:\n{e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
