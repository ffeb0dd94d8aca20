//! Monte Carlo benchmarking: per-trial pipeline, estimate matching,
//! aggregation and the analytic complexity table.

mod aggregate;
mod complexity;
mod config;
mod matching;
mod trial;

pub use aggregate::{
    aggregate, compare_extractions, empirical_cdf, run_cell, run_sweep, sweep_population,
    AggregateReport, SweepCell,
};
pub use complexity::{
    complexity_table, reference_complexity_table, render_complexity_table, ComplexityCell,
    TABLE_ELEMENTS, TABLE_SOURCES,
};
pub use config::{
    splitmix64, trial_seed, AlgoId, ArrayConfig, ExtractId, ExtractionConfig, NichingConfig,
    ScenarioConfig, SourceConfig, REFERENCE_SOURCES,
};
pub use matching::{match_estimates, pair_cost, Matching, SourceError};
pub use trial::{run_trial, run_trial_extractions, TrialReport};
