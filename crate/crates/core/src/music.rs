//! 2D-MUSIC pseudo-spectrum, exhaustive grid search and the analytic FLOP model.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DoaError, Result};
use crate::signal::{wrap_azimuth, ArrayGeometry, CMatrix, CVector, SubspaceSplit};
use crate::space::{circular_azimuth_diff, Objective, Point};

/// Floor on `aᴴ G_n a` so exact orthogonality stays finite.
pub const MUSIC_FLOOR: f64 = 1e-12;

/// `G_n = U_n U_nᴴ`, the projector onto the noise subspace.
#[derive(Debug, Clone)]
pub struct NoiseProjector {
    matrix: CMatrix,
    num_sources: usize,
    geometry: ArrayGeometry,
}

impl NoiseProjector {
    pub fn from_split(split: &SubspaceSplit, geometry: &ArrayGeometry) -> Result<Self> {
        let un = &split.noise_basis;
        if un.nrows() != geometry.num_elements() {
            return Err(DoaError::Dimension {
                expected: format!("{} rows", geometry.num_elements()),
                actual: format!("{} rows", un.nrows()),
            });
        }
        let mut matrix = un * un.adjoint();
        hermitize(&mut matrix);
        Ok(Self {
            matrix,
            num_sources: split.signal_basis.ncols(),
            geometry: geometry.clone(),
        })
    }

    /// Wraps an explicit projector matrix after checking Hermitian symmetry,
    /// idempotence and `trace = M - L`.
    pub fn from_matrix(
        matrix: CMatrix,
        num_sources: usize,
        geometry: &ArrayGeometry,
    ) -> Result<Self> {
        let m = geometry.num_elements();
        if matrix.nrows() != m || matrix.ncols() != m {
            return Err(DoaError::Dimension {
                expected: format!("{m} x {m}"),
                actual: format!("{} x {}", matrix.nrows(), matrix.ncols()),
            });
        }
        if num_sources >= m {
            return Err(DoaError::Config(format!(
                "source count {num_sources} must be below element count {m}"
            )));
        }
        let herm = frobenius(&(matrix.adjoint() - &matrix));
        let idem = frobenius(&(&matrix * &matrix - &matrix));
        let trace_err = (matrix.trace().re - (m - num_sources) as f64).abs();
        if herm > 1e-12 || idem > 1e-8 || trace_err > 1e-8 {
            return Err(DoaError::Config(format!(
                "not a rank-{} projector (hermitian err {herm:.2e}, idempotence err {idem:.2e}, trace err {trace_err:.2e})",
                m - num_sources
            )));
        }
        Ok(Self {
            matrix,
            num_sources,
            geometry: geometry.clone(),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn num_sources(&self) -> usize {
        self.num_sources
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    /// `aᴴ G_n a`, real and in `[0, M]` up to rounding.
    pub fn quadratic_form(&self, a: &CVector) -> f64 {
        let g = &self.matrix;
        let n = a.len();
        let mut acc = 0.0;
        for j in 0..n {
            let mut col = Complex64::new(0.0, 0.0);
            for i in 0..n {
                col += a[i].conj() * g[(i, j)];
            }
            acc += (col * a[j]).re;
        }
        acc
    }
}

fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `1 / max(aᴴ(θ, φ) G_n a(θ, φ), ε)` with angles in radians.
///
/// Azimuth is taken modulo 2π.
pub fn music_value(proj: &NoiseProjector, azimuth: f64, elevation: f64) -> f64 {
    let a = proj
        .geometry
        .steering_unchecked(wrap_azimuth(azimuth), elevation);
    1.0 / proj.quadratic_form(&a).max(MUSIC_FLOOR)
}

/// Same spectrum computed from the noise basis as `1 / ‖U_nᴴ a‖²`.
pub fn music_value_from_basis(
    noise_basis: &CMatrix,
    geometry: &ArrayGeometry,
    azimuth: f64,
    elevation: f64,
) -> f64 {
    let a = geometry.steering_unchecked(wrap_azimuth(azimuth), elevation);
    let proj = noise_basis.adjoint() * a;
    let q: f64 = proj.iter().map(|z| z.norm_sqr()).sum();
    1.0 / q.max(MUSIC_FLOOR)
}

/// MUSIC spectrum as an optimizer objective over degree-valued points,
/// counting every evaluation.
#[derive(Debug)]
pub struct MusicObjective<'a> {
    proj: &'a NoiseProjector,
    evaluations: AtomicUsize,
}

impl<'a> MusicObjective<'a> {
    pub fn new(proj: &'a NoiseProjector) -> Self {
        Self {
            proj,
            evaluations: AtomicUsize::new(0),
        }
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }
}

impl Objective for MusicObjective<'_> {
    fn evaluate(&self, p: Point) -> f64 {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        music_value(self.proj, p.theta.to_radians(), p.phi.to_radians())
    }
}

/// Uniform angular grid, endpoints inclusive, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub azimuth_range: (f64, f64),
    pub elevation_range: (f64, f64),
    pub azimuth_samples: usize,
    pub elevation_samples: usize,
}

impl Default for GridSpec {
    /// 1° grid over `[0, 360] × [0, 90]`: 361 × 91 points.
    fn default() -> Self {
        Self {
            azimuth_range: (0.0, 360.0),
            elevation_range: (0.0, 90.0),
            azimuth_samples: 361,
            elevation_samples: 91,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.azimuth_samples < 2 || self.elevation_samples < 2 {
            return Err(DoaError::Config(
                "grid needs at least 2 samples per axis".into(),
            ));
        }
        let (a0, a1) = self.azimuth_range;
        let (e0, e1) = self.elevation_range;
        if !(a0 < a1 && e0 < e1) {
            return Err(DoaError::Config("grid ranges must satisfy lo < hi".into()));
        }
        if e0 < 0.0 || e1 > 90.0 {
            return Err(DoaError::Config(
                "elevation range must lie in [0, 90]".into(),
            ));
        }
        Ok(())
    }

    /// `J = N_θ · N_φ`.
    pub fn len(&self) -> usize {
        self.azimuth_samples * self.elevation_samples
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn azimuth_step(&self) -> f64 {
        (self.azimuth_range.1 - self.azimuth_range.0) / (self.azimuth_samples - 1) as f64
    }

    pub fn elevation_step(&self) -> f64 {
        (self.elevation_range.1 - self.elevation_range.0) / (self.elevation_samples - 1) as f64
    }

    pub fn azimuth(&self, i: usize) -> f64 {
        self.azimuth_range.0 + i as f64 * self.azimuth_step()
    }

    pub fn elevation(&self, k: usize) -> f64 {
        self.elevation_range.0 + k as f64 * self.elevation_step()
    }
}

/// Spectrum values on a grid, indexed `[azimuth][elevation]`.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub spec: GridSpec,
    values: Vec<f64>,
}

impl SpectrumGrid {
    /// Evaluates `objective` on every grid point. Rows are evaluated in parallel.
    pub fn evaluate<O: Objective + Sync>(spec: GridSpec, objective: &O) -> Result<Self> {
        spec.validate()?;
        let n_el = spec.elevation_samples;
        let values: Vec<f64> = (0..spec.azimuth_samples)
            .into_par_iter()
            .flat_map_iter(|i| {
                let theta = spec.azimuth(i);
                (0..n_el).map(move |k| objective.evaluate(Point::new(theta, spec.elevation(k))))
            })
            .collect();
        Ok(Self { spec, values })
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.spec.elevation_samples + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Cells strictly greater than every existing 8-neighbor, in scan order.
    pub fn local_maxima(&self) -> Vec<GridPeak> {
        let (na, ne) = (self.spec.azimuth_samples, self.spec.elevation_samples);
        let mut out = Vec::new();
        for i in 0..na {
            for k in 0..ne {
                let v = self.get(i, k);
                let mut is_max = true;
                'nb: for di in -1i64..=1 {
                    for dk in -1i64..=1 {
                        if di == 0 && dk == 0 {
                            continue;
                        }
                        let (ii, kk) = (i as i64 + di, k as i64 + dk);
                        if ii < 0 || kk < 0 || ii >= na as i64 || kk >= ne as i64 {
                            continue;
                        }
                        if self.get(ii as usize, kk as usize) >= v {
                            is_max = false;
                            break 'nb;
                        }
                    }
                }
                if is_max {
                    out.push(GridPeak {
                        theta: self.spec.azimuth(i),
                        phi: self.spec.elevation(k),
                        value: v,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPeak {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct GridSearchResult {
    /// Top peaks by value, descending.
    pub peaks: Vec<GridPeak>,
    /// Fewer than the requested number of local maxima exist.
    pub shortfall: bool,
    /// Spectrum evaluations performed.
    pub evaluations: usize,
}

/// Exhaustive spectrum evaluation followed by strict local-maximum detection.
///
/// Maxima duplicated across the azimuth seam (0° and 360° at the same
/// elevation) are merged, keeping the first in scan order.
pub fn grid_search(
    proj: &NoiseProjector,
    spec: GridSpec,
    num_peaks: usize,
) -> Result<GridSearchResult> {
    let objective = MusicObjective::new(proj);
    let grid = SpectrumGrid::evaluate(spec, &objective)?;
    let mut peaks = merge_seam_duplicates(grid.local_maxima(), &spec);
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value));
    let shortfall = peaks.len() < num_peaks;
    peaks.truncate(num_peaks);
    Ok(GridSearchResult {
        peaks,
        shortfall,
        evaluations: objective.evaluations(),
    })
}

fn merge_seam_duplicates(peaks: Vec<GridPeak>, spec: &GridSpec) -> Vec<GridPeak> {
    let step_t = spec.azimuth_step();
    let step_p = spec.elevation_step();
    let mut kept: Vec<GridPeak> = Vec::with_capacity(peaks.len());
    for p in peaks {
        let dup = kept.iter_mut().find(|q| {
            circular_azimuth_diff(q.theta, p.theta) < step_t && (q.phi - p.phi).abs() < step_p
        });
        match dup {
            Some(q) if p.value > q.value => *q = p,
            Some(_) => {}
            None => kept.push(p),
        }
    }
    kept
}

/// Parameters of the analytic cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopModel {
    /// Array elements M.
    pub elements: u64,
    /// Sources L.
    pub sources: u64,
    /// Grid points J.
    pub grid_points: u64,
    /// Population size N_R.
    pub population: u64,
    /// Generations Max_iter.
    pub max_iter: u64,
}

impl FlopModel {
    pub fn new(
        elements: u64,
        sources: u64,
        grid_points: u64,
        population: u64,
        max_iter: u64,
    ) -> Result<Self> {
        let m = Self {
            elements,
            sources,
            grid_points,
            population,
            max_iter,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if [
            self.elements,
            self.sources,
            self.grid_points,
            self.population,
            self.max_iter,
        ]
        .contains(&0)
        {
            return Err(DoaError::Config(
                "FLOP model parameters must be positive".into(),
            ));
        }
        if self.sources >= self.elements {
            return Err(DoaError::Config("FLOP model needs L < M".into()));
        }
        Ok(())
    }

    /// Subspace decomposition term `M²(L + 2)`.
    pub fn decomposition(&self) -> u64 {
        self.elements * self.elements * (self.sources + 2)
    }

    /// One spectrum evaluation, `(M + 1)(M − L)`.
    pub fn per_evaluation(&self) -> u64 {
        (self.elements + 1) * (self.elements - self.sources)
    }

    /// Grid search: `M²(L+2) + J(M+1)(M−L)`.
    pub fn flops_music(&self) -> u64 {
        self.decomposition() + self.grid_points * self.per_evaluation()
    }

    /// Population search: `M²(L+2) + Max_iter·N_R·((M+1)(M−L) + N_R − 1)`.
    pub fn flops_population(&self) -> u64 {
        self.decomposition()
            + self.max_iter * self.population * (self.per_evaluation() + self.population - 1)
    }
}

pub fn flops_music(model: &FlopModel) -> f64 {
    model.flops_music() as f64
}

pub fn flops_population(model: &FlopModel) -> f64 {
    model.flops_population() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{
        sample_covariance, steering_vector, subspace_split, synthesize_snapshots, SourceSet,
    };
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn projector(angles: &[(f64, f64)], snr: f64, seed: u64) -> (NoiseProjector, SubspaceSplit) {
        let g = ArrayGeometry::uca_unit(12).unwrap();
        let src = SourceSet::unit_power(angles).unwrap();
        let x = synthesize_snapshots(&g, &src, snr, 100, seed).unwrap();
        let split = subspace_split(&sample_covariance(&x), angles.len()).unwrap();
        (NoiseProjector::from_split(&split, &g).unwrap(), split)
    }

    #[test]
    fn projector_invariants() {
        let (p, _) = projector(&[(30.0, 40.0), (200.0, 70.0)], 10.0, 1);
        let g = p.matrix();
        assert!(frobenius(&(g.adjoint() - g)) < 1e-12);
        assert!(frobenius(&(g * g - g)) < 1e-8);
        assert!((g.trace().re - 10.0).abs() < 1e-8);
        assert!(NoiseProjector::from_matrix(g.clone(), 2, p.geometry()).is_ok());
        assert!(
            NoiseProjector::from_matrix(g * Complex64::new(2.0, 0.0), 2, p.geometry()).is_err()
        );
    }

    #[test]
    fn identity_projector_gives_one_over_m() {
        let geom = ArrayGeometry::uca_unit(8).unwrap();
        let p = NoiseProjector::from_matrix(CMatrix::identity(8, 8), 0, &geom).unwrap();
        for (az, el) in [(0.0, 0.0), (1.0, 0.5), (5.0, FRAC_PI_2)] {
            assert!((music_value(&p, az, el) - 1.0 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_and_basis_routes_agree() {
        let (p, split) = projector(&[(30.0, 40.0), (200.0, 70.0), (300.0, 10.0)], 0.0, 4);
        for k in 0..50 {
            let az = k as f64 * 0.37 % TAU;
            let el = (k as f64 * 0.11) % FRAC_PI_2;
            let a = music_value(&p, az, el);
            let b = music_value_from_basis(&split.noise_basis, p.geometry(), az, el);
            assert!((a - b).abs() / a < 1e-10);
        }
    }

    #[test]
    fn noiseless_peak_dominates_far_points() {
        let (p, _) = projector(&[(100.0, 50.0)], f64::INFINITY, 2);
        let peak = music_value(&p, 100f64.to_radians(), 50f64.to_radians());
        assert!(peak >= 1e8, "{peak}");
        for th in (0..360).step_by(5) {
            for ph in (0..=90).step_by(5) {
                let d = ((th as f64 - 100.0).powi(2) + (ph as f64 - 50.0).powi(2)).sqrt();
                if d >= 10.0 {
                    let v = music_value(&p, (th as f64).to_radians(), (ph as f64).to_radians());
                    assert!(v * 1e3 <= peak, "({th},{ph}) = {v}");
                }
            }
        }
    }

    #[test]
    fn spectrum_is_periodic_in_azimuth_and_bounded_below() {
        let (p, _) = projector(&[(30.0, 40.0), (200.0, 70.0)], 5.0, 3);
        for k in 0..40 {
            let az = k as f64 * 0.157;
            let el = (k as f64 * 0.07) % FRAC_PI_2;
            let a = music_value(&p, az, el);
            let b = music_value(&p, az + TAU, el);
            assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            assert!(a >= 1.0 / 12.0 - 1e-12);
            let q = p.quadratic_form(&steering_vector(p.geometry(), az % TAU, el).unwrap());
            assert!((-1e-12..=12.0 + 1e-9).contains(&q));
        }
    }

    #[test]
    fn grid_search_recovers_noiseless_sources() {
        let truth = [(30.42, 60.39), (120.27, 29.42), (240.51, 45.55)];
        let (p, _) = projector(&truth, f64::INFINITY, 9);
        let res = grid_search(&p, GridSpec::default(), 3).unwrap();
        assert!(!res.shortfall);
        assert_eq!(res.evaluations, 361 * 91);
        for (t, f) in truth {
            let hit = res
                .peaks
                .iter()
                .any(|pk| (pk.theta - t).abs() <= 0.5 && (pk.phi - f).abs() <= 0.5);
            assert!(hit, "missing ({t}, {f}) in {:?}", res.peaks);
        }
        assert!(res.peaks.windows(2).all(|w| w[0].value >= w[1].value));
    }

    #[test]
    fn constant_spectrum_has_no_maxima() {
        let geom = ArrayGeometry::uca_unit(6).unwrap();
        let p = NoiseProjector::from_matrix(CMatrix::identity(6, 6), 0, &geom).unwrap();
        let spec = GridSpec {
            azimuth_samples: 37,
            elevation_samples: 10,
            ..GridSpec::default()
        };
        let res = grid_search(&p, spec, 2).unwrap();
        assert!(res.peaks.is_empty());
        assert!(res.shortfall);
        assert_eq!(res.evaluations, 37 * 10);
    }

    #[test]
    fn grid_search_is_deterministic() {
        let (p, _) = projector(&[(30.0, 40.0), (200.0, 70.0)], 0.0, 5);
        let a = grid_search(&p, GridSpec::default(), 2).unwrap();
        let b = grid_search(&p, GridSpec::default(), 2).unwrap();
        assert_eq!(a.peaks, b.peaks);
    }

    #[test]
    fn seam_duplicates_merge() {
        let spec = GridSpec::default();
        let peaks = vec![
            GridPeak {
                theta: 0.0,
                phi: 40.0,
                value: 5.0,
            },
            GridPeak {
                theta: 120.0,
                phi: 40.0,
                value: 3.0,
            },
            GridPeak {
                theta: 360.0,
                phi: 40.0,
                value: 5.0,
            },
            GridPeak {
                theta: 360.0,
                phi: 70.0,
                value: 2.0,
            },
        ];
        let merged = merge_seam_duplicates(peaks, &spec);
        assert_eq!(merged.len(), 3);
        assert_eq!(merged[0].theta, 0.0);
    }

    #[test]
    fn flop_model_closed_forms() {
        let j = 361 * 91;
        let m = FlopModel::new(12, 3, j, 256, 20).unwrap();
        assert_eq!(m.flops_music(), 144 * 5 + j * 13 * 9);
        assert_eq!(m.flops_population(), 144 * 5 + 20 * 256 * (13 * 9 + 255));
        assert!((flops_music(&m) / 1e6 - 3.84).abs() < 0.01);
        assert!((flops_population(&m) / 1e6 - 1.9).abs() < 0.05);
        let m = FlopModel::new(12, 10, j, 256, 20).unwrap();
        assert!((flops_music(&m) / 1e6 - 0.9).abs() < 0.05);
        let m = FlopModel::new(32, 3, j, 256, 20).unwrap();
        assert!((flops_music(&m) / 1e6 - 31.4).abs() < 0.05);
        let m = FlopModel::new(12, 1, j, 256, 20).unwrap();
        assert!((flops_population(&m) / 1e6 - 2.0).abs() < 0.05);
        let m = FlopModel::new(128, 10, j, 256, 20).unwrap();
        assert!((flops_population(&m) / 1e6 - 79.4).abs() < 0.05);
        assert!(FlopModel::new(4, 4, j, 256, 20).is_err());
        assert!(FlopModel::new(4, 1, 0, 256, 20).is_err());
    }

    #[test]
    fn grid_size_follows_from_cost_model() {
        // Solve the grid-search cost for J using two independent cells:
        // (M=12, L=1) ≈ 4.7 MFLOPs and (M=128, L=1) ≈ 538.2 MFLOPs.
        let solve = |m: f64, l: f64, mflops: f64| {
            (mflops * 1e6 - m * m * (l + 2.0)) / ((m + 1.0) * (m - l))
        };
        let j_small = solve(12.0, 1.0, 4.7);
        let j_large = solve(128.0, 1.0, 538.2);
        assert!((j_small - 32851.0).abs() / 32851.0 < 0.011, "{j_small}");
        assert!((j_large - 32851.0).abs() / 32851.0 < 1e-3, "{j_large}");
        assert_eq!(GridSpec::default().len(), 32851);
    }
}
