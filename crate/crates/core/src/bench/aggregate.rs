use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DoaError, Result};

use super::config::{AlgoId, ExtractId, ScenarioConfig};
use super::trial::{run_trial_extractions, TrialReport};

/// Statistics over the trials of one (method, SNR, population size) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    pub algo: AlgoId,
    pub extraction: Option<ExtractId>,
    pub elements: usize,
    pub sources: usize,
    pub snr_db: f64,
    pub snapshots: usize,
    pub population_size: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean absolute errors over successful trials only (NaN if none).
    pub mae_theta_deg: f64,
    pub mae_phi_deg: f64,
    /// Mean absolute errors over every matched source of every trial.
    pub raw_mae_theta_deg: f64,
    pub raw_mae_phi_deg: f64,
    pub model_flops: f64,
    pub mean_evaluations: f64,
    pub mean_wall_ms: f64,
}

impl AggregateReport {
    pub fn model_mflops(&self) -> f64 {
        self.model_flops / 1e6
    }

    /// Unsuccessful trials.
    pub fn failures(&self) -> usize {
        self.trials - self.successes
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Reduces trial reports, in order, to one aggregate.
pub fn aggregate(cfg: &ScenarioConfig, trials: &[TrialReport]) -> Result<AggregateReport> {
    let first = trials
        .first()
        .ok_or_else(|| DoaError::Config("cannot aggregate zero trials".into()))?;
    let ok = || trials.iter().filter(|t| t.success);
    let successes = ok().count();
    Ok(AggregateReport {
        algo: first.algo,
        extraction: first.extraction,
        elements: cfg.array.elements,
        sources: first.errors.len(),
        snr_db: first.snr_db,
        snapshots: cfg.snapshots,
        population_size: cfg.optimizer.population_size,
        trials: trials.len(),
        successes,
        success_rate: successes as f64 / trials.len() as f64,
        mae_theta_deg: mean(ok().flat_map(|t| t.matched_errors().map(|e| e.theta))),
        mae_phi_deg: mean(ok().flat_map(|t| t.matched_errors().map(|e| e.phi))),
        raw_mae_theta_deg: mean(
            trials
                .iter()
                .flat_map(|t| t.matched_errors().map(|e| e.theta)),
        ),
        raw_mae_phi_deg: mean(
            trials
                .iter()
                .flat_map(|t| t.matched_errors().map(|e| e.phi)),
        ),
        model_flops: mean(trials.iter().map(|t| t.model_flops as f64)),
        mean_evaluations: mean(trials.iter().map(|t| t.evaluations as f64)),
        mean_wall_ms: mean(trials.iter().map(|t| t.wall_ms)),
    })
}

/// Empirical CDF: sorted sample values paired with `(i + 1) / n`.
pub fn empirical_cdf(samples: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, (i + 1) as f64 / n))
        .collect()
}

/// One aggregate together with the trials behind it.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub report: AggregateReport,
    pub trials: Vec<TrialReport>,
}

impl SweepCell {
    pub fn theta_errors(&self) -> Vec<f64> {
        self.trials
            .iter()
            .flat_map(|t| t.matched_errors().map(|e| e.theta))
            .collect()
    }

    pub fn phi_errors(&self) -> Vec<f64> {
        self.trials
            .iter()
            .flat_map(|t| t.matched_errors().map(|e| e.phi))
            .collect()
    }
}

/// Runs `cfg.trials` trials at one SNR in parallel, applying each of
/// `extractions` to the same population. Results are ordered by trial index.
pub fn run_cell(
    cfg: &ScenarioConfig,
    algo: AlgoId,
    extractions: &[ExtractId],
    snr_db: f64,
) -> Result<Vec<SweepCell>> {
    let per_trial: Vec<Vec<TrialReport>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial_extractions(cfg, algo, extractions, snr_db, i))
        .collect::<Result<_>>()?;
    let columns = per_trial[0].len();
    (0..columns)
        .map(|c| {
            let trials: Vec<TrialReport> = per_trial.iter().map(|row| row[c].clone()).collect();
            Ok(SweepCell {
                report: aggregate(cfg, &trials)?,
                trials,
            })
        })
        .collect()
}

/// The configured method at every configured SNR.
pub fn run_sweep(cfg: &ScenarioConfig) -> Result<Vec<SweepCell>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &snr in &cfg.snr_db {
        out.extend(run_cell(cfg, cfg.algorithm, &[cfg.extraction], snr)?);
    }
    Ok(out)
}

/// Every extraction strategy applied to identical final populations of the
/// configured optimizer, at every SNR.
pub fn compare_extractions(cfg: &ScenarioConfig) -> Result<Vec<SweepCell>> {
    cfg.validate()?;
    if cfg.algorithm == AlgoId::Grid {
        return Err(DoaError::Config(
            "extraction comparison needs a population method".into(),
        ));
    }
    let mut out = Vec::new();
    for &snr in &cfg.snr_db {
        out.extend(run_cell(cfg, cfg.algorithm, &ExtractId::ALL, snr)?);
    }
    Ok(out)
}

/// The configured method at every population size and SNR.
pub fn sweep_population(cfg: &ScenarioConfig) -> Result<Vec<SweepCell>> {
    cfg.validate()?;
    if cfg.algorithm == AlgoId::Grid {
        return Err(DoaError::Config(
            "population sweep needs a population method".into(),
        ));
    }
    let mut out = Vec::new();
    for &size in &cfg.population_sizes {
        let mut c = cfg.clone();
        c.optimizer.population_size = size;
        c.optimizer.neighborhood_size = c.optimizer.neighborhood_size.min(size - 1);
        c.validate()?;
        for &snr in &c.snr_db {
            out.extend(run_cell(&c, c.algorithm, &[c.extraction], snr)?);
        }
    }
    Ok(out)
}
