//! `donflow`: runs the Donaldson flow on the flat four-torus, checks the
//! identities behind it, and probes the Hessian of stored states.
//!
//! Exit status: 0 on success, 1 on configuration, usage or I/O errors,
//! 2 when the numerics fail (a flow step fails or a state is degenerate),
//! 3 when an identity check fails.

mod commands;
mod lock;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "donflow",
    version,
    about = "Donaldson geometric flow of symplectic forms on the flat 4-torus"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// JSON configuration; missing keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory, overriding `out_dir`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Random seed, overriding `seed`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the flow and write monitors, snapshots and a summary.
    Run,
    /// Run identity suites and write one JSON report per check.
    Check {
        /// Suites to run, overriding `check_suite` (repeatable).
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        /// Random instances of the pointwise suites, overriding `samples`.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Evaluate the Hessian of a snapshot along random exact directions.
    Hessian {
        /// Snapshot header (`.json`).
        snapshot: PathBuf,
        /// Number of random directions.
        #[arg(long, default_value_t = 20)]
        directions: usize,
    },
    /// Write a template configuration (to stdout without a path).
    Init { path: Option<PathBuf> },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                commands::EXIT_CONFIG
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(commands::EXIT_CONFIG);
        }
    }
    let overrides = commands::Overrides {
        out: cli.global.out,
        seed: cli.global.seed,
    };
    let code = match cli.command {
        Command::Run => commands::run(cli.global.config.as_deref(), &overrides),
        Command::Check { suites, samples } => {
            commands::check(cli.global.config.as_deref(), &overrides, &suites, samples)
        }
        Command::Hessian {
            snapshot,
            directions,
        } => commands::hessian(
            cli.global.config.as_deref(),
            &overrides,
            &snapshot,
            directions,
        ),
        Command::Init { path } => commands::init(path.as_deref()),
    };
    ExitCode::from(code)
}
