use crate::error::{DoaError, Result};
use crate::optimizer::{nearest_neighbors, Population};

use super::Extraction;

/// Keeps individuals fitter than all of their `k` nearest neighbors, then the
/// top `count` of those by fitness.
pub fn extract_klocalmax(pop: &Population, count: usize, k: usize) -> Result<Extraction> {
    if k == 0 || k >= pop.len() {
        return Err(DoaError::Config(format!(
            "k must be in [1, {}), got {k}",
            pop.len()
        )));
    }
    let positions = pop.positions();
    let cands = (0..pop.len())
        .filter(|&i| {
            let f = pop.individuals[i].fitness;
            nearest_neighbors(&positions, i, k)
                .into_iter()
                .all(|j| f > pop.individuals[j].fitness)
        })
        .map(|i| (i, None))
        .collect();
    Ok(Extraction::from_candidates(pop, cands, count))
}
