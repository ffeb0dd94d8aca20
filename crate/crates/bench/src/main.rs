//! `doa-bench`: Monte Carlo experiments for 2D direction-of-arrival peak
//! search, written as CSV.

mod cli;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use doa_core::bench::{
    compare_extractions, reference_complexity_table, render_complexity_table, run_sweep,
    sweep_population, ScenarioConfig, SweepCell,
};
use doa_core::DoaError;

use cli::{Cli, Command, ScenarioArgs};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Run(#[from] DoaError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Run(DoaError::Config(_)) => 2,
            _ => 1,
        }
    }
}

fn load_config(args: &ScenarioArgs) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(algo) = args.algo {
        cfg.algorithm = algo;
    }
    if let Some(extract) = args.extract {
        cfg.extraction = extract;
    }
    if !args.snr.is_empty() {
        cfg.snr_db = args.snr.clone();
    }
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

fn emit(cfg: &ScenarioConfig, cells: &[SweepCell], out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)?;
    output::write_summary(cfg, cells, &out.join("summary.csv"))?;
    output::write_errors(cells, &out.join("errors.csv"))?;
    print!("{}", output::render_summary(cells));
    eprintln!(
        "wrote {} and {}",
        out.join("summary.csv").display(),
        out.join("errors.csv").display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let cfg = load_config(&args)?;
            emit(&cfg, &run_sweep(&cfg)?, &args.out)
        }
        Command::CompareExtract(args) => {
            let cfg = load_config(&args)?;
            emit(&cfg, &compare_extractions(&cfg)?, &args.out)
        }
        Command::SweepPop(args) => {
            let cfg = load_config(&args)?;
            emit(&cfg, &sweep_population(&cfg)?, &args.out)
        }
        Command::Table3 { out } => {
            let table = reference_complexity_table();
            print!("{}", render_complexity_table(&table));
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                output::write_complexity(&table, &dir.join("complexity.csv"))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("doa-bench: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
