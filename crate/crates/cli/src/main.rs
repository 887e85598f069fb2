use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nfradar_cli::{run, Config, Experiment, RunOptions};

#[derive(Parser)]
#[command(
    name = "nfradar",
    version,
    about = "Near-field plate ranging experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the stationary-phase model with plate quadrature per pair.
    ValidateSpa(Common),
    /// Normalised ML ambiguity curves over the range grid.
    Ambiguity(Common),
    /// Cramér-Rao bound at fixed receive SNR.
    Crb(Common),
    /// Print the effective configuration.
    Config(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one field, e.g. `scenario.range=3.5` or `sweep.bandwidth=[1e8,1e9]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Validate at the scenario carrier, lifting the quadrature cost ceiling.
    #[arg(long)]
    slow: bool,
    /// Noise seed; overrides `noise.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &ConfigArgs, seed: Option<u64>) -> Result<Config> {
    let mut overrides = args.overrides.clone();
    if let Some(seed) = seed {
        overrides.push(format!("noise.seed={seed}"));
    }
    Config::load(args.config.as_deref(), &overrides)
}

fn execute(experiment: Experiment, common: &Common) -> Result<()> {
    let cfg = load(&common.config, common.seed)?;
    let opts = RunOptions { slow: common.slow };
    match &common.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            run(experiment, &cfg, opts, &mut w)?;
            w.flush()?;
        }
        None => run(experiment, &cfg, opts, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::ValidateSpa(c) => execute(Experiment::ValidateSpa, c),
        Command::Ambiguity(c) => execute(Experiment::Ambiguity, c),
        Command::Crb(c) => execute(Experiment::Crb, c),
        Command::Config(c) => load(c, None).map(|cfg| print!("{}", cfg.to_toml())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
