use std::path::Path;

use doa_core::bench::{ComplexityCell, ScenarioConfig, SweepCell};
use serde::Serialize;

/// One row of summary.csv. The first thirteen columns are the stable
/// interface; later columns are appended only.
#[derive(Debug, Serialize)]
struct SummaryRow<'a> {
    algo: &'a str,
    extraction: &'a str,
    #[serde(rename = "M")]
    elements: usize,
    #[serde(rename = "L")]
    sources: usize,
    snr_db: f64,
    snapshots: usize,
    trials: usize,
    mae_theta_deg: f64,
    mae_phi_deg: f64,
    success_rate: f64,
    model_mflops: f64,
    measured_evals: f64,
    wall_ms: f64,
    raw_mae_theta_deg: f64,
    raw_mae_phi_deg: f64,
    population_size: usize,
}

/// One matched source of one trial, for error CDFs.
#[derive(Debug, Serialize)]
struct ErrorRow<'a> {
    algo: &'a str,
    extraction: &'a str,
    population_size: usize,
    snr_db: f64,
    trial: usize,
    source: usize,
    theta_err_deg: f64,
    phi_err_deg: f64,
    success: bool,
}

#[derive(Debug, Serialize)]
struct ComplexityRow {
    #[serde(rename = "M")]
    elements: u64,
    #[serde(rename = "L")]
    sources: u64,
    music_flops: u64,
    population_flops: u64,
    music_mflops: f64,
    population_mflops: f64,
    ratio: f64,
}

fn extraction_name(cell: &SweepCell) -> &'static str {
    cell.report.extraction.map_or("none", |e| e.as_str())
}

pub fn write_summary(cfg: &ScenarioConfig, cells: &[SweepCell], path: &Path) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for c in cells {
        let r = &c.report;
        w.serialize(SummaryRow {
            algo: r.algo.as_str(),
            extraction: extraction_name(c),
            elements: r.elements,
            sources: r.sources,
            snr_db: r.snr_db,
            snapshots: cfg.snapshots,
            trials: r.trials,
            mae_theta_deg: r.mae_theta_deg,
            mae_phi_deg: r.mae_phi_deg,
            success_rate: r.success_rate,
            model_mflops: r.model_mflops(),
            measured_evals: r.mean_evaluations,
            wall_ms: r.mean_wall_ms,
            raw_mae_theta_deg: r.raw_mae_theta_deg,
            raw_mae_phi_deg: r.raw_mae_phi_deg,
            population_size: r.population_size,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Unmatched sources are omitted; the success column flags their trials.
pub fn write_errors(cells: &[SweepCell], path: &Path) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for c in cells {
        for t in &c.trials {
            for (source, e) in t.errors.iter().enumerate() {
                let Some(e) = e else { continue };
                w.serialize(ErrorRow {
                    algo: t.algo.as_str(),
                    extraction: extraction_name(c),
                    population_size: c.report.population_size,
                    snr_db: t.snr_db,
                    trial: t.trial,
                    source,
                    theta_err_deg: e.theta,
                    phi_err_deg: e.phi,
                    success: t.success,
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_complexity(cells: &[ComplexityCell], path: &Path) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for c in cells {
        w.serialize(ComplexityRow {
            elements: c.elements,
            sources: c.sources,
            music_flops: c.music_flops,
            population_flops: c.population_flops,
            music_mflops: c.music_mflops(),
            population_mflops: c.population_mflops(),
            ratio: c.ratio(),
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable digest of a sweep for the terminal.
pub fn render_summary(cells: &[SweepCell]) -> String {
    let mut s = format!(
        "{:<8} {:<10} {:>5} {:>7} {:>7} {:>10} {:>10} {:>8} {:>9}\n",
        "algo", "extract", "P", "snr_db", "trials", "mae_theta", "mae_phi", "success", "MFLOPs"
    );
    for c in cells {
        let r = &c.report;
        s.push_str(&format!(
            "{:<8} {:<10} {:>5} {:>7.1} {:>7} {:>10.4} {:>10.4} {:>7.1}% {:>9.3}\n",
            r.algo.as_str(),
            extraction_name(c),
            r.population_size,
            r.snr_db,
            r.trials,
            r.mae_theta_deg,
            r.mae_phi_deg,
            100.0 * r.success_rate,
            r.model_mflops()
        ));
    }
    s
}
