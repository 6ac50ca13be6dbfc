#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oseen_cli::{run, Experiment, ExperimentConfig, Overrides};

/// Numerical studies of 2D vorticity near the Oseen vortex.
#[derive(Parser)]
#[command(name = "oseen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML configuration; keys it omits take the experiment defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    VortexIdentities,
    Convergence,
    Entropy,
    SpectrumSweep,
    LinearDecay,
    CrossCheck,
    /// Runs the experiment named in --config (for example a manifest of an earlier run).
    Run,
    /// Prints the default configuration of an experiment.
    Defaults {
        #[arg(value_enum)]
        experiment: Experiment,
    },
}

const EXIT_CHECKS_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ABORTED: u8 = 3;

fn resolve(cli: &Cli) -> Result<ExperimentConfig, String> {
    let requested = match cli.command {
        Command::VortexIdentities => Some(Experiment::VortexIdentities),
        Command::Convergence => Some(Experiment::Convergence),
        Command::Entropy => Some(Experiment::Entropy),
        Command::SpectrumSweep => Some(Experiment::SpectrumSweep),
        Command::LinearDecay => Some(Experiment::LinearDecay),
        Command::CrossCheck => Some(Experiment::CrossCheck),
        Command::Run | Command::Defaults { .. } => None,
    };
    let mut cfg = match (&cli.common.config, requested) {
        (Some(path), _) => ExperimentConfig::load(path).map_err(|e| format!("{}: {e}", path.display()))?,
        (None, Some(e)) => ExperimentConfig::defaults(e),
        (None, None) => return Err("`run` needs --config".into()),
    };
    if let Some(e) = requested {
        if cfg.experiment != e {
            return Err(format!("config describes {} but the subcommand is {}", cfg.experiment.name(), e.name()));
        }
    }
    let c = &cli.common;
    cfg.apply(&Overrides { out: c.out.clone(), workers: c.workers, seed: c.seed });
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    faer::set_global_parallelism(faer::Par::Seq);
    let cli = Cli::parse();
    if let Command::Defaults { experiment } = cli.command {
        return match ExperimentConfig::defaults(experiment).to_toml() {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(EXIT_USAGE)
            }
        };
    }
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(&cfg) {
        Ok(summary) => {
            for c in &summary.checks {
                println!("{}", c.line());
            }
            for n in &summary.notes {
                println!("note: {n}");
            }
            println!("summary written to {}", cfg.out.join("summary.json").display());
            if let Some(e) = &summary.error {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_ABORTED)
            } else if summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECKS_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
