use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use qstab_cli::{parse_config, run, Experiment};

#[derive(Parser)]
#[command(name = "qstab", version, about = "Runs register-stabilization experiments and writes CSV artifacts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; results do not depend on this.
        #[arg(long)]
        threads: Option<usize>,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a config, then print it with defaults filled in.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the available experiments.
    ListExperiments,
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            threads,
            out,
        } => {
            let mut cfg = parse_config(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output = o;
            }
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(k) = threads {
                pool = pool.num_threads(k);
            }
            let files = pool.build().context("building thread pool")?.install(|| run(&cfg))?;
            for f in files {
                println!("{}", f.display());
            }
        }
        Command::Validate { config } => {
            let cfg = parse_config(&config)?;
            println!("{}", serde_json::to_string_pretty(&cfg)?);
        }
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<20} {}", e.name(), e.description());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
