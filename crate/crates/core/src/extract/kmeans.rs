use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DoaError, Result};
use crate::optimizer::Population;
use crate::space::Point;

use super::{fittest, Extraction};

const MAX_LLOYD_ITERS: usize = 100;

/// k-means with k-means++ seeding. Returns the cluster index of every point.
///
/// Empty clusters are kept empty; assignment ties go to the lower cluster.
pub fn kmeans_pp(points: &[Point], clusters: usize, seed: u64) -> Result<Vec<usize>> {
    let n = points.len();
    if clusters == 0 || clusters > n {
        return Err(DoaError::Config(format!(
            "cluster count must be in [1, {n}], got {clusters}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centres = vec![points[rng.gen_range(0..n)]];
    let mut d2: Vec<f64> = points.iter().map(|p| p.distance_sq(&centres[0])).collect();
    while centres.len() < clusters {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            // guard against landing on a zero-weight tail through rounding
            if d2[pick] == 0.0 {
                pick = d2.iter().rposition(|&w| w > 0.0).unwrap_or(pick);
            }
            pick
        } else {
            rng.gen_range(0..n)
        };
        let c = points[next];
        for (w, p) in d2.iter_mut().zip(points) {
            *w = w.min(p.distance_sq(&c));
        }
        centres.push(c);
    }

    let assign = |centres: &[Point]| -> Vec<usize> {
        points
            .iter()
            .map(|p| {
                let mut best = 0;
                for (c, centre) in centres.iter().enumerate().skip(1) {
                    if p.distance_sq(centre) < p.distance_sq(&centres[best]) {
                        best = c;
                    }
                }
                best
            })
            .collect()
    };
    let mut labels = assign(&centres);
    for _ in 0..MAX_LLOYD_ITERS {
        let mut sums = vec![(0.0, 0.0, 0usize); clusters];
        for (p, &c) in points.iter().zip(&labels) {
            sums[c].0 += p.theta;
            sums[c].1 += p.phi;
            sums[c].2 += 1;
        }
        for (centre, s) in centres.iter_mut().zip(&sums) {
            if s.2 > 0 {
                *centre = Point::new(s.0 / s.2 as f64, s.1 / s.2 as f64);
            }
        }
        let next = assign(&centres);
        if next == labels {
            break;
        }
        labels = next;
    }
    Ok(labels)
}

/// Partitions the population into exactly `count` k-means++ clusters and
/// takes the fittest member of each.
///
/// A cluster left empty (possible only with duplicate positions) is filled by
/// the fittest individual not already chosen, so `count` estimates are always
/// returned.
pub fn extract_kmeanspp(pop: &Population, count: usize, seed: u64) -> Result<Extraction> {
    let labels = kmeans_pp(&pop.positions(), count, seed)?;
    let mut chosen: Vec<Option<usize>> = (0..count)
        .map(|c| fittest(pop, (0..pop.len()).filter(|&i| labels[i] == c)))
        .collect();
    for c in 0..count {
        if chosen[c].is_none() {
            let taken: Vec<usize> = chosen.iter().flatten().copied().collect();
            chosen[c] = fittest(pop, (0..pop.len()).filter(|i| !taken.contains(i)));
        }
    }
    let cands = chosen
        .into_iter()
        .enumerate()
        .map(|(c, i)| (i.expect("count <= population size"), Some(c)))
        .collect();
    Ok(Extraction::from_candidates(pop, cands, count))
}
