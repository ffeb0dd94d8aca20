use serde::Serialize;

use crate::error::Result;
use crate::music::{FlopModel, GridSpec};

/// One (M, L) cell of the grid-search vs population cost comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityCell {
    pub elements: u64,
    pub sources: u64,
    pub music_flops: u64,
    pub population_flops: u64,
}

impl ComplexityCell {
    pub fn music_mflops(&self) -> f64 {
        self.music_flops as f64 / 1e6
    }

    pub fn population_mflops(&self) -> f64 {
        self.population_flops as f64 / 1e6
    }

    /// Population cost relative to grid search (`1 : ratio`).
    pub fn ratio(&self) -> f64 {
        self.population_flops as f64 / self.music_flops as f64
    }

    /// `"3.8/1.9 (1:0.50)"`.
    pub fn formatted(&self) -> String {
        format!(
            "{:.1}/{:.1} (1:{:.2})",
            self.music_mflops(),
            self.population_mflops(),
            self.ratio()
        )
    }
}

pub const TABLE_ELEMENTS: [u64; 3] = [12, 32, 128];
pub const TABLE_SOURCES: [u64; 3] = [1, 3, 10];

/// Cost model evaluated over `elements × sources`, row-major by source count.
pub fn complexity_table(
    elements: &[u64],
    sources: &[u64],
    grid_points: u64,
    population: u64,
    max_iter: u64,
) -> Result<Vec<ComplexityCell>> {
    let mut out = Vec::new();
    for &l in sources {
        for &m in elements {
            let model = FlopModel::new(m, l, grid_points, population, max_iter)?;
            out.push(ComplexityCell {
                elements: m,
                sources: l,
                music_flops: model.flops_music(),
                population_flops: model.flops_population(),
            });
        }
    }
    Ok(out)
}

/// The standard comparison: M ∈ {12, 32, 128}, L ∈ {1, 3, 10}, 1° grid,
/// N_R = 256, Max_iter = 20.
pub fn reference_complexity_table() -> Vec<ComplexityCell> {
    complexity_table(
        &TABLE_ELEMENTS,
        &TABLE_SOURCES,
        GridSpec::default().len() as u64,
        256,
        20,
    )
    .expect("reference parameters are valid")
}

/// Plain-text rendering with one row per source count.
pub fn render_complexity_table(cells: &[ComplexityCell]) -> String {
    let mut elements: Vec<u64> = cells.iter().map(|c| c.elements).collect();
    elements.dedup();
    elements.sort_unstable();
    elements.dedup();
    let mut out = String::from("MUSIC/Population (MFLOPs)");
    for m in &elements {
        out.push_str(&format!("\tM = {m}"));
    }
    out.push('\n');
    let mut sources: Vec<u64> = cells.iter().map(|c| c.sources).collect();
    sources.sort_unstable();
    sources.dedup();
    for l in sources {
        out.push_str(&format!("L = {l}"));
        for m in &elements {
            if let Some(c) = cells.iter().find(|c| c.sources == l && c.elements == *m) {
                out.push('\t');
                out.push_str(&c.formatted());
            }
        }
        out.push('\n');
    }
    out
}
