//! `harper converge|jumps|butterfly|verify CONFIG --out DIR [--workers N] [--seed S]`
//!
//! Exit status: 0 when the run completed and every invariant held, 1 when
//! an invariant failed (details in the manifest), 2 on configuration or
//! runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use harper_core::experiments::{execute, write_run, ExperimentConfig};

#[derive(Parser)]
#[command(name = "harper", version, about = "Finite-window spectra of Harper operators and magnetic Laplacians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// F_m(λ) along the window tower, against the quadrature oracle.
    Converge(RunArgs),
    /// Jumps D_m, interior jumps D′_m and the exact D(λ).
    Jumps(RunArgs),
    /// Band intervals for every p/q with q ≤ q_max.
    Butterfly(RunArgs),
    /// Run the invariant suites and write a pass/fail report.
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config.
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(name: &str, args: &RunArgs) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = ExperimentConfig::from_toml(&text).with_context(|| format!("in {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let (out, seconds) = execute(name, &cfg, args.workers)?;
    let written = write_run(&args.out, name, &args.config, &text, &cfg, args.workers, &out, seconds)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for f in &out.failures {
        eprintln!("FAILED: {f}");
    }
    for p in written {
        println!("{}", p.display());
    }
    Ok(out.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Converge(a) => ("converge", a),
        Command::Jumps(a) => ("jumps", a),
        Command::Butterfly(a) => ("butterfly", a),
        Command::Verify(a) => ("verify", a),
    };
    match run(name, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
