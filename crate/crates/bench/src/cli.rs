use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use doa_core::bench::{AlgoId, ExtractId};

#[derive(Debug, Parser)]
#[command(
    name = "doa-bench",
    version,
    about = "Monte Carlo benchmarks for 2D DOA peak search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// MAE and success rate versus SNR for one method.
    Run(ScenarioArgs),
    /// Print the analytic grid-search vs population cost table.
    Table3 {
        /// Also write complexity.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DBSCAN, k-localmax and k-means++ applied to the same final populations.
    CompareExtract(ScenarioArgs),
    /// Repeat the SNR sweep for every configured population size.
    SweepPop(ScenarioArgs),
}

/// Scenario selection. Flags override values from --config.
///
/// Defaults: 12-element UCA with radius one wavelength; sources at
/// (30.42°, 60.39°), (120.27°, 29.42°), (240.51°, 45.55°); 100 snapshots;
/// SNR -10, -5, 0, 5, 10 dB; 1000 trials; master seed 1; algorithm denm
/// (P = 256, 20 generations, F = 0.5, CR = 0.9, m = 16); extraction dbscan
/// (eps = 3°, min_pts = 4); success when every source is within 2° on both
/// axes; population sweep over 64, 128, 192, 256, 320.
#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// TOML file mirroring the scenario schema (see README).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed; trial i uses splitmix64(seed ^ splitmix64(i)).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo trials per SNR point [default: 1000].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output directory for summary.csv and errors.csv.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Peak-search method: grid, de, denm, dcde, sharede, sde [default: denm].
    #[arg(long)]
    pub algo: Option<AlgoId>,
    /// Peak extraction: dbscan, klocalmax, kmeanspp [default: dbscan].
    #[arg(long)]
    pub extract: Option<ExtractId>,
    /// SNR points in dB; repeat or comma-separate to override the list.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr: Vec<f64>,
}
