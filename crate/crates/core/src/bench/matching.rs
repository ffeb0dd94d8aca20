use serde::Serialize;

use crate::error::{DoaError, Result};
use crate::extract::DoaEstimate;
use crate::signal::SourceSet;
use crate::space::circular_azimuth_diff;

/// Absolute error of one matched source, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceError {
    /// Circular azimuth error, in `[0, 180]`.
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// For each true source, the index of its estimate.
    pub assignment: Vec<Option<usize>>,
    /// For each true source, its error if matched.
    pub errors: Vec<Option<SourceError>>,
    pub total_cost: f64,
}

impl Matching {
    pub fn all_matched(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }
}

/// Matching cost between a true direction and an estimate.
pub fn pair_cost(truth: (f64, f64), est: (f64, f64)) -> f64 {
    circular_azimuth_diff(truth.0, est.0) + (truth.1 - est.1).abs()
}

/// Minimum-total-cost one-to-one assignment of estimates to true sources.
///
/// Every estimate is assigned; truths left over are unmatched. Solved
/// exactly by dynamic programming over subsets of truths, which is cheap for
/// the handful of sources involved (`L <= 20`).
pub fn match_estimates(truth: &SourceSet, estimates: &[DoaEstimate]) -> Result<Matching> {
    let l = truth.len();
    let k = estimates.len();
    if k > l {
        return Err(DoaError::Config(format!("{k} estimates for {l} sources")));
    }
    if l > 20 {
        return Err(DoaError::Config(format!(
            "too many sources to match exactly: {l}"
        )));
    }
    let truths: Vec<(f64, f64)> = truth.angles_deg().collect();
    let cost = |e: usize, t: usize| pair_cost(truths[t], (estimates[e].theta, estimates[e].phi));

    // best[mask]: min cost of assigning the first popcount(mask) estimates to
    // exactly the truths in mask.
    let states = 1usize << l;
    let mut best = vec![f64::INFINITY; states];
    let mut from = vec![usize::MAX; states];
    best[0] = 0.0;
    for mask in 0..states {
        let e = mask.count_ones() as usize;
        if e >= k || !best[mask].is_finite() {
            continue;
        }
        for t in 0..l {
            if mask & (1 << t) != 0 {
                continue;
            }
            let next = mask | (1 << t);
            let c = best[mask] + cost(e, t);
            if c < best[next] {
                best[next] = c;
                from[next] = t;
            }
        }
    }
    let (end, total_cost) = (0..states)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (m, best[m]))
        .fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 { x } else { acc },
        );

    let mut assignment = vec![None; l];
    let mut mask = if k == 0 { 0 } else { end };
    for e in (0..k).rev() {
        let t = from[mask];
        assignment[t] = Some(e);
        mask &= !(1 << t);
    }
    let errors = assignment
        .iter()
        .enumerate()
        .map(|(t, a)| {
            a.map(|e| SourceError {
                theta: circular_azimuth_diff(truths[t].0, estimates[e].theta),
                phi: (truths[t].1 - estimates[e].phi).abs(),
            })
        })
        .collect();
    Ok(Matching {
        assignment,
        errors,
        total_cost: if k == 0 { 0.0 } else { total_cost },
    })
}
