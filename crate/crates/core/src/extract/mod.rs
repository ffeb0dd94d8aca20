//! Turning a final population into at most `L` direction estimates.

mod dbscan;
mod kmeans;
mod localmax;

use serde::{Deserialize, Serialize};

use crate::error::{DoaError, Result};
use crate::optimizer::Population;

pub use dbscan::{dbscan, extract_dbscan, ClusterLabeling, Label};
pub use kmeans::{extract_kmeanspp, kmeans_pp};
pub use localmax::extract_klocalmax;

/// One recovered direction, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoaEstimate {
    pub theta: f64,
    pub phi: f64,
    pub fitness: f64,
    /// Cluster the representative came from, if the method clusters.
    pub cluster: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    /// Sorted by fitness, descending.
    pub estimates: Vec<DoaEstimate>,
    /// Population index of each estimate's representative.
    pub members: Vec<usize>,
    /// Fewer candidates than requested were found.
    pub shortfall: bool,
}

impl Extraction {
    fn from_candidates(
        pop: &Population,
        mut cands: Vec<(usize, Option<usize>)>,
        count: usize,
    ) -> Self {
        // fitness descending, then population index
        cands.sort_by(|a, b| {
            pop.individuals[b.0]
                .fitness
                .total_cmp(&pop.individuals[a.0].fitness)
                .then(a.0.cmp(&b.0))
        });
        let shortfall = cands.len() < count;
        cands.truncate(count);
        let estimates = cands
            .iter()
            .map(|&(i, cluster)| {
                let ind = &pop.individuals[i];
                DoaEstimate {
                    theta: ind.position.theta,
                    phi: ind.position.phi,
                    fitness: ind.fitness,
                    cluster,
                }
            })
            .collect();
        Self {
            estimates,
            members: cands.into_iter().map(|c| c.0).collect(),
            shortfall,
        }
    }
}

/// Index of the fittest member, lowest index on ties.
pub(crate) fn fittest(pop: &Population, members: impl IntoIterator<Item = usize>) -> Option<usize> {
    members.into_iter().reduce(|best, i| {
        if pop.individuals[i].fitness > pop.individuals[best].fitness {
            i
        } else {
            best
        }
    })
}

/// Peak extraction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extractor {
    Dbscan {
        eps: f64,
        min_pts: usize,
    },
    #[serde(rename = "klocalmax")]
    KLocalMax {
        k: usize,
    },
    #[serde(rename = "kmeanspp")]
    KMeansPP {
        seed: u64,
    },
}

impl Extractor {
    pub const DEFAULT_EPS: f64 = 3.0;
    pub const DEFAULT_MIN_PTS: usize = 4;
    pub const DEFAULT_K: usize = 8;

    pub fn dbscan_default() -> Self {
        Extractor::Dbscan {
            eps: Self::DEFAULT_EPS,
            min_pts: Self::DEFAULT_MIN_PTS,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Extractor::Dbscan { .. } => "dbscan",
            Extractor::KLocalMax { .. } => "klocalmax",
            Extractor::KMeansPP { .. } => "kmeanspp",
        }
    }

    pub fn extract(&self, pop: &Population, count: usize) -> Result<Extraction> {
        if pop.is_empty() {
            return Err(DoaError::Config(
                "cannot extract from an empty population".into(),
            ));
        }
        match *self {
            Extractor::Dbscan { eps, min_pts } => extract_dbscan(pop, count, eps, min_pts),
            Extractor::KLocalMax { k } => extract_klocalmax(pop, count, k),
            Extractor::KMeansPP { seed } => extract_kmeanspp(pop, count, seed),
        }
    }
}
