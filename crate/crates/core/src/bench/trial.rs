use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::extract::{DoaEstimate, Extraction};
use crate::music::{grid_search, FlopModel, MusicObjective, NoiseProjector};
use crate::signal::{sample_covariance, subspace_split, synthesize_snapshots};

use super::config::{stream_seed, trial_seed, AlgoId, ExtractId, ScenarioConfig};
use super::matching::{match_estimates, SourceError};

const DATA_STREAM: u64 = 1;
const OPTIMIZER_STREAM: u64 = 2;
const EXTRACT_STREAM: u64 = 3;

/// Outcome of one Monte Carlo trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub snr_db: f64,
    pub algo: AlgoId,
    /// `None` for grid search, which needs no extraction step.
    pub extraction: Option<ExtractId>,
    pub estimates: Vec<DoaEstimate>,
    /// Per true source; `None` when it was left unmatched.
    pub errors: Vec<Option<SourceError>>,
    pub success: bool,
    /// The search produced fewer than `L` peaks.
    pub shortfall: bool,
    /// Analytic cost: grid-search model for `grid`, population model otherwise.
    pub model_flops: u64,
    /// Objective evaluations actually performed.
    pub evaluations: usize,
    /// Excluded from determinism guarantees.
    pub wall_ms: f64,
}

impl TrialReport {
    pub fn matched_errors(&self) -> impl Iterator<Item = &SourceError> {
        self.errors.iter().flatten()
    }
}

/// Runs trial `index` at one SNR: synthesize, estimate the covariance, split,
/// search, extract and match against the truth.
pub fn run_trial(
    cfg: &ScenarioConfig,
    algo: AlgoId,
    extraction: ExtractId,
    snr_db: f64,
    index: usize,
) -> Result<TrialReport> {
    let mut reports = run_trial_extractions(cfg, algo, &[extraction], snr_db, index)?;
    Ok(reports.remove(0))
}

/// Like [`run_trial`], but applies several extraction strategies to the same
/// final population. Grid search returns a single report.
pub fn run_trial_extractions(
    cfg: &ScenarioConfig,
    algo: AlgoId,
    extractions: &[ExtractId],
    snr_db: f64,
    index: usize,
) -> Result<Vec<TrialReport>> {
    let start = Instant::now();
    let seed = trial_seed(cfg.master_seed, index);
    let geom = cfg.geometry()?;
    let truth = cfg.source_set()?;
    let l = truth.len();

    let x = synthesize_snapshots(
        &geom,
        &truth,
        snr_db,
        cfg.snapshots,
        stream_seed(seed, DATA_STREAM),
    )?;
    let split = subspace_split(&sample_covariance(&x), l)?;
    let proj = NoiseProjector::from_split(&split, &geom)?;

    let model = FlopModel {
        elements: geom.num_elements() as u64,
        sources: l as u64,
        grid_points: cfg.grid.len() as u64,
        population: cfg.optimizer.population_size as u64,
        max_iter: cfg.optimizer.max_iterations as u64,
    };

    let finish = |extraction: Option<ExtractId>,
                  estimates: Vec<DoaEstimate>,
                  shortfall: bool,
                  model_flops,
                  evaluations,
                  wall_ms|
     -> Result<TrialReport> {
        let matching = match_estimates(&truth, &estimates)?;
        let thr = cfg.success_threshold_deg;
        let success = matching.all_matched()
            && matching
                .errors
                .iter()
                .flatten()
                .all(|e| e.theta <= thr && e.phi <= thr);
        Ok(TrialReport {
            trial: index,
            seed,
            snr_db,
            algo,
            extraction,
            estimates,
            errors: matching.errors,
            success,
            shortfall,
            model_flops,
            evaluations,
            wall_ms,
        })
    };

    let Some(algorithm) = cfg.algorithm_for(algo)? else {
        let res = grid_search(&proj, cfg.grid, l)?;
        let estimates = res
            .peaks
            .iter()
            .map(|p| DoaEstimate {
                theta: p.theta,
                phi: p.phi,
                fitness: p.value,
                cluster: None,
            })
            .collect();
        let wall = start.elapsed().as_secs_f64() * 1e3;
        return Ok(vec![finish(
            None,
            estimates,
            res.shortfall,
            model.flops_music(),
            res.evaluations,
            wall,
        )?]);
    };

    let objective = MusicObjective::new(&proj);
    let mut opt_cfg = cfg.optimizer;
    opt_cfg.seed = stream_seed(seed, OPTIMIZER_STREAM);
    let evo = algorithm.run(
        &objective,
        &crate::space::SearchBox::default(),
        &opt_cfg,
        &mut (),
    )?;
    let evaluations = objective.evaluations();
    let search_ms = start.elapsed().as_secs_f64() * 1e3;

    extractions
        .iter()
        .map(|&id| {
            let t0 = Instant::now();
            let extractor = cfg.extractor_for(id, stream_seed(seed, EXTRACT_STREAM))?;
            let Extraction {
                estimates,
                shortfall,
                ..
            } = extractor.extract(&evo.population, l)?;
            let wall = search_ms + t0.elapsed().as_secs_f64() * 1e3;
            finish(
                Some(id),
                estimates,
                shortfall,
                model.flops_population(),
                evaluations,
                wall,
            )
        })
        .collect()
}
