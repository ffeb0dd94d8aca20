use crate::error::{DoaError, Result};
use crate::optimizer::Population;
use crate::space::Point;

use super::{fittest, Extraction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Noise,
    Cluster(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabeling {
    pub labels: Vec<Label>,
    pub cluster_count: usize,
}

impl ClusterLabeling {
    /// Point indices of each cluster, in index order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count];
        for (i, l) in self.labels.iter().enumerate() {
            if let Label::Cluster(c) = l {
                out[*c].push(i);
            }
        }
        out
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Noise).count()
    }
}

/// DBSCAN over flat Euclidean distance.
///
/// A point is core when at least `min_pts` points (itself included) lie
/// within `eps`. Points are scanned in input order; a border point joins the
/// first cluster that reaches it.
pub fn dbscan(points: &[Point], eps: f64, min_pts: usize) -> Result<ClusterLabeling> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(DoaError::Config(format!("eps must be positive, got {eps}")));
    }
    if min_pts == 0 {
        return Err(DoaError::Config("min_pts must be >= 1".into()));
    }
    let n = points.len();
    let eps2 = eps * eps;
    let region = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| points[i].distance_sq(&points[j]) <= eps2)
            .collect()
    };

    let mut labels: Vec<Option<Label>> = vec![None; n];
    let mut clusters = 0;
    for i in 0..n {
        if labels[i].is_some() {
            continue;
        }
        let nb = region(i);
        if nb.len() < min_pts {
            labels[i] = Some(Label::Noise);
            continue;
        }
        let c = clusters;
        clusters += 1;
        labels[i] = Some(Label::Cluster(c));
        let mut queue: Vec<usize> = nb;
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head];
            head += 1;
            match labels[q] {
                Some(Label::Cluster(_)) => continue,
                Some(Label::Noise) => {
                    // border point, never expanded
                    labels[q] = Some(Label::Cluster(c));
                    continue;
                }
                None => {}
            }
            labels[q] = Some(Label::Cluster(c));
            let qn = region(q);
            if qn.len() >= min_pts {
                queue.extend(qn);
            }
        }
    }
    Ok(ClusterLabeling {
        labels: labels
            .into_iter()
            .map(|l| l.unwrap_or(Label::Noise))
            .collect(),
        cluster_count: clusters,
    })
}

/// DBSCAN on positions, then the fittest member of each cluster; the top
/// `count` representatives by fitness are kept. Noise is never selected.
pub fn extract_dbscan(
    pop: &Population,
    count: usize,
    eps: f64,
    min_pts: usize,
) -> Result<Extraction> {
    let labeling = dbscan(&pop.positions(), eps, min_pts)?;
    let cands = labeling
        .members()
        .into_iter()
        .enumerate()
        .filter_map(|(c, m)| fittest(pop, m).map(|i| (i, Some(c))))
        .collect();
    Ok(Extraction::from_candidates(pop, cands, count))
}
