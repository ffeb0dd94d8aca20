use crate::space::Point;

/// Indices of the `m` points nearest to `points[i]`, excluding `i`.
///
/// Ordered by distance, ties broken by lower index.
pub fn nearest_neighbors(points: &[Point], i: usize, m: usize) -> Vec<usize> {
    let origin = points[i];
    let mut cand: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, p)| (origin.distance_sq(p), j))
        .collect();
    let m = m.min(cand.len());
    if m == 0 {
        return Vec::new();
    }
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if m < cand.len() {
        cand.select_nth_unstable_by(m - 1, cmp);
        cand.truncate(m);
    }
    cand.sort_unstable_by(cmp);
    cand.into_iter().map(|(_, j)| j).collect()
}

/// `nearest_neighbors` for every point.
pub fn neighborhoods(points: &[Point], m: usize) -> Vec<Vec<usize>> {
    (0..points.len())
        .map(|i| nearest_neighbors(points, i, m))
        .collect()
}
