use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use nanoqed_cli::error::{EXIT_CONFIG, EXIT_OK};
use nanoqed_cli::{run, validate, write_bundle, CliError, Mode, RunConfig, ValidationOptions};

#[derive(Parser)]
#[command(name = "nanoqed", version, about = "Quantum emitters in a plasmonic nanocavity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV tables.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Worker threads for sweeps.
    #[arg(long, env = "NANOQED_WORKERS")]
    workers: Option<usize>,
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long)]
    seed_free: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Time evolution from the initial state.
    Simulate(RunArgs),
    /// Steady state of the driven system.
    Steady(RunArgs),
    /// Parameter sweep described by the [sweep] block.
    Sweep(RunArgs),
    /// Closed-form hybrid-state frequencies.
    Hybrid(RunArgs),
    /// Run the built-in acceptance checks.
    Validate {
        /// Ignored; accepted so that every subcommand takes the same flags.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the report to this directory as validation.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let (mode, args) = match cmd {
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::Steady(a) => (Mode::Steady, a),
        Command::Sweep(a) => (Mode::Sweep, a),
        Command::Hybrid(a) => (Mode::Hybrid, a),
        Command::Validate { out, common, .. } => {
            let report = validate(&ValidationOptions {
                workers: common.workers,
                ..Default::default()
            });
            println!("{report}");
            if let Some(dir) = out {
                let path = dir.join("validation.txt");
                std::fs::create_dir_all(&dir)
                    .and_then(|_| std::fs::write(&path, format!("{report}\n")))
                    .map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
            }
            return match report.failed() {
                0 => Ok(()),
                failed => Err(CliError::Validation {
                    failed,
                    total: report.checks.len(),
                }),
            };
        }
    };
    let cfg = RunConfig::load(&args.config)?;
    info!("{mode}: {} emitter(s)", cfg.system.n_emitters());
    let bundle = run(&cfg, mode, args.common.workers)?;
    for path in write_bundle(&bundle, &args.out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { EXIT_OK as u8 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
