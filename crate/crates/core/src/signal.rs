//! Far-field narrowband signal model for planar arrays.
//!
//! Covers steering vectors, synthetic snapshot generation, the sample
//! covariance estimate and its eigen-split into signal and noise subspaces.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{DoaError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalue gap below which the signal/noise split is reported as ambiguous.
pub const DEGENERATE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// Uniform circular array of the given radius (meters).
    Circular { radius: f64 },
    /// Uniform rectangular array in the x-y plane with equal spacing on both axes.
    Rectangular {
        rows: usize,
        cols: usize,
        spacing: f64,
    },
}

/// Sensor layout of a planar array.
///
/// For the circular layout, element `m` (1-based) sits at azimuth `2πm/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    num_elements: usize,
    wavelength: f64,
    layout: Layout,
    element_azimuths: Vec<f64>,
    // (x, y) in meters, used by the rectangular layout.
    positions: Vec<(f64, f64)>,
}

impl ArrayGeometry {
    /// Uniform circular array.
    pub fn uca(num_elements: usize, wavelength: f64, radius: f64) -> Result<Self> {
        if num_elements < 2 {
            return Err(DoaError::Geometry(format!(
                "need at least 2 elements, got {num_elements}"
            )));
        }
        check_positive("wavelength", wavelength)?;
        check_positive("radius", radius)?;
        let element_azimuths: Vec<f64> = (1..=num_elements)
            .map(|m| TAU * m as f64 / num_elements as f64)
            .collect();
        let positions = element_azimuths
            .iter()
            .map(|&az| (radius * az.cos(), radius * az.sin()))
            .collect();
        Ok(Self {
            num_elements,
            wavelength,
            layout: Layout::Circular { radius },
            element_azimuths,
            positions,
        })
    }

    /// Unit-wavelength UCA with radius equal to one wavelength.
    pub fn uca_unit(num_elements: usize) -> Result<Self> {
        Self::uca(num_elements, 1.0, 1.0)
    }

    /// Uniform rectangular array centred on the origin.
    ///
    /// Steering uses the planar phase `-(2π/λ)(x cosθ + y sinθ) sinφ`, which
    /// reduces to the circular form when elements lie on a circle.
    pub fn ura(rows: usize, cols: usize, wavelength: f64, spacing: f64) -> Result<Self> {
        let num_elements = rows * cols;
        if num_elements < 2 {
            return Err(DoaError::Geometry(format!(
                "need at least 2 elements, got {rows}x{cols}"
            )));
        }
        check_positive("wavelength", wavelength)?;
        check_positive("spacing", spacing)?;
        let x0 = (cols as f64 - 1.0) * spacing / 2.0;
        let y0 = (rows as f64 - 1.0) * spacing / 2.0;
        let mut positions = Vec::with_capacity(num_elements);
        for r in 0..rows {
            for c in 0..cols {
                positions.push((c as f64 * spacing - x0, r as f64 * spacing - y0));
            }
        }
        let element_azimuths = positions
            .iter()
            .map(|&(x, y)| y.atan2(x).rem_euclid(TAU))
            .collect();
        Ok(Self {
            num_elements,
            wavelength,
            layout: Layout::Rectangular {
                rows,
                cols,
                spacing,
            },
            element_azimuths,
            positions,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.num_elements
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Azimuth of each element around the array centre, in radians.
    pub fn element_azimuths(&self) -> &[f64] {
        &self.element_azimuths
    }

    /// Steering vector without range checks on the angles (radians).
    pub(crate) fn steering_unchecked(&self, azimuth: f64, elevation: f64) -> CVector {
        let k = TAU / self.wavelength;
        let sin_el = elevation.sin();
        match self.layout {
            Layout::Circular { radius } => {
                let scale = k * radius * sin_el;
                CVector::from_iterator(
                    self.num_elements,
                    self.element_azimuths.iter().map(|&az| {
                        let phase = -scale * (az - azimuth).cos();
                        Complex64::from_polar(1.0, phase)
                    }),
                )
            }
            Layout::Rectangular { .. } => {
                let (c, s) = (azimuth.cos(), azimuth.sin());
                CVector::from_iterator(
                    self.num_elements,
                    self.positions.iter().map(|&(x, y)| {
                        let phase = -k * (x * c + y * s) * sin_el;
                        Complex64::from_polar(1.0, phase)
                    }),
                )
            }
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(DoaError::Geometry(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// Array response to a unit plane wave from `(azimuth, elevation)`, both in radians.
///
/// Azimuth must lie in `[0, 2π)` and elevation in `[0, π/2]`.
pub fn steering_vector(geom: &ArrayGeometry, azimuth: f64, elevation: f64) -> Result<CVector> {
    if !(0.0..TAU).contains(&azimuth) {
        return Err(DoaError::AngleOutOfRange {
            name: "azimuth",
            value: azimuth,
            lo: 0.0,
            hi: TAU,
        });
    }
    if !(0.0..=FRAC_PI_2).contains(&elevation) {
        return Err(DoaError::AngleOutOfRange {
            name: "elevation",
            value: elevation,
            lo: 0.0,
            hi: FRAC_PI_2,
        });
    }
    Ok(geom.steering_unchecked(azimuth, elevation))
}

/// Incident sources. Angles are stored in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSet {
    azimuths_deg: Vec<f64>,
    elevations_deg: Vec<f64>,
    powers: Vec<f64>,
}

impl SourceSet {
    pub fn new(azimuths_deg: Vec<f64>, elevations_deg: Vec<f64>, powers: Vec<f64>) -> Result<Self> {
        let l = azimuths_deg.len();
        if l == 0 {
            return Err(DoaError::Sources("at least one source is required".into()));
        }
        if elevations_deg.len() != l || powers.len() != l {
            return Err(DoaError::Sources(format!(
                "length mismatch: {l} azimuths, {} elevations, {} powers",
                elevations_deg.len(),
                powers.len()
            )));
        }
        for (i, (&az, &el)) in azimuths_deg.iter().zip(&elevations_deg).enumerate() {
            if !(0.0..360.0).contains(&az) {
                return Err(DoaError::Sources(format!(
                    "azimuth {i} = {az} not in [0, 360)"
                )));
            }
            if !(0.0..=90.0).contains(&el) {
                return Err(DoaError::Sources(format!(
                    "elevation {i} = {el} not in [0, 90]"
                )));
            }
            for j in 0..i {
                if azimuths_deg[j] == az && elevations_deg[j] == el {
                    return Err(DoaError::Sources(format!("sources {j} and {i} coincide")));
                }
            }
        }
        if let Some(p) = powers.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(DoaError::Sources(format!(
                "source power must be positive, got {p}"
            )));
        }
        Ok(Self {
            azimuths_deg,
            elevations_deg,
            powers,
        })
    }

    /// Unit-power sources at the given `(azimuth, elevation)` pairs in degrees.
    pub fn unit_power(angles_deg: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            angles_deg.iter().map(|a| a.0).collect(),
            angles_deg.iter().map(|a| a.1).collect(),
            vec![1.0; angles_deg.len()],
        )
    }

    pub fn len(&self) -> usize {
        self.azimuths_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.azimuths_deg.is_empty()
    }

    pub fn azimuths_deg(&self) -> &[f64] {
        &self.azimuths_deg
    }

    pub fn elevations_deg(&self) -> &[f64] {
        &self.elevations_deg
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    /// `(azimuth, elevation)` pairs in degrees.
    pub fn angles_deg(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.azimuths_deg
            .iter()
            .copied()
            .zip(self.elevations_deg.iter().copied())
    }
}

/// M×T matrix of array snapshots, one column per time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: CMatrix,
}

impl SnapshotMatrix {
    pub fn new(data: CMatrix) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(DoaError::Dimension {
                expected: "non-empty M x T matrix".into(),
                actual: format!("{} x {}", data.nrows(), data.ncols()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(DoaError::Dimension {
                expected: "finite entries".into(),
                actual: "non-finite entry".into(),
            });
        }
        Ok(Self { data })
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn num_elements(&self) -> usize {
        self.data.nrows()
    }

    pub fn snapshots(&self) -> usize {
        self.data.ncols()
    }
}

/// Noise variance for a given per-element SNR in dB.
///
/// The reference signal power is the mean source power, so with equal-power
/// sources the SNR is the single-source power over the noise variance.
/// `+inf` gives a noiseless model. `-inf` is handled by the caller by
/// silencing the sources.
fn noise_variance(reference_power: f64, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else if snr_db == f64::NEG_INFINITY {
        reference_power
    } else {
        reference_power / 10f64.powf(snr_db / 10.0)
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(scale * re, scale * im)
}

/// Draws `X(t) = A s(t) + n(t)` for `t = 1..=snapshots`.
///
/// Source symbols are i.i.d. circular complex Gaussian with the configured
/// powers. Noise is circular complex Gaussian, white across elements.
/// `snr_db = -inf` silences the sources and leaves unit-reference noise.
pub fn synthesize_snapshots(
    geom: &ArrayGeometry,
    sources: &SourceSet,
    snr_db: f64,
    snapshots: usize,
    seed: u64,
) -> Result<SnapshotMatrix> {
    if snapshots == 0 {
        return Err(DoaError::Config("snapshots must be >= 1".into()));
    }
    if snr_db.is_nan() {
        return Err(DoaError::Config("snr_db is NaN".into()));
    }
    let m = geom.num_elements();
    let l = sources.len();
    let manifold = manifold(geom, sources)?;
    let reference = sources.powers().iter().sum::<f64>() / l as f64;
    let sigma2 = noise_variance(reference, snr_db);
    let silent = snr_db == f64::NEG_INFINITY;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut signals = CMatrix::zeros(l, snapshots);
    for t in 0..snapshots {
        for (k, &p) in sources.powers().iter().enumerate() {
            let s = complex_gaussian(&mut rng, p);
            signals[(k, t)] = if silent { Complex64::new(0.0, 0.0) } else { s };
        }
    }
    let mut data = &manifold * &signals;
    if sigma2 > 0.0 {
        for t in 0..snapshots {
            for i in 0..m {
                data[(i, t)] += complex_gaussian(&mut rng, sigma2);
            }
        }
    }
    SnapshotMatrix::new(data)
}

/// Columns are the steering vectors of each source.
pub fn manifold(geom: &ArrayGeometry, sources: &SourceSet) -> Result<CMatrix> {
    let cols = sources
        .angles_deg()
        .map(|(az, el)| steering_vector(geom, az.to_radians(), el.to_radians()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CMatrix::from_columns(&cols))
}

/// `R = X Xᴴ / T`.
pub fn sample_covariance(x: &SnapshotMatrix) -> CMatrix {
    let t = x.snapshots() as f64;
    let d = x.data();
    let mut r = d * d.adjoint();
    r.unscale_mut(t);
    // Force exact Hermitian symmetry.
    let n = r.nrows();
    for i in 0..n {
        r[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (r[(i, j)] + r[(j, i)].conj()) * 0.5;
            r[(i, j)] = avg;
            r[(j, i)] = avg.conj();
        }
    }
    r
}

/// Eigen-split of a Hermitian covariance into signal and noise subspaces.
#[derive(Debug, Clone)]
pub struct SubspaceSplit {
    pub signal_basis: CMatrix,
    pub noise_basis: CMatrix,
    /// Descending.
    pub signal_eigenvalues: Vec<f64>,
    /// Descending.
    pub noise_eigenvalues: Vec<f64>,
    /// Set when eigenvalues `L` and `L+1` are closer than [`DEGENERATE_GAP`],
    /// in which case the split is not unique.
    pub degenerate: bool,
}

impl SubspaceSplit {
    /// `U_s Λ_s U_sᴴ + U_n Λ_n U_nᴴ`.
    pub fn reconstruct(&self) -> CMatrix {
        let part = |u: &CMatrix, lam: &[f64]| {
            let mut scaled = u.clone();
            for (j, &l) in lam.iter().enumerate() {
                scaled.column_mut(j).scale_mut(l);
            }
            scaled * u.adjoint()
        };
        part(&self.signal_basis, &self.signal_eigenvalues)
            + part(&self.noise_basis, &self.noise_eigenvalues)
    }
}

/// Splits `r` into the top-`num_sources` eigenvectors and the remainder.
///
/// Eigenvalues are sorted descending with ties kept in solver order.
pub fn subspace_split(r: &CMatrix, num_sources: usize) -> Result<SubspaceSplit> {
    let m = r.nrows();
    if r.ncols() != m {
        return Err(DoaError::Dimension {
            expected: "square matrix".into(),
            actual: format!("{} x {}", r.nrows(), r.ncols()),
        });
    }
    if num_sources >= m {
        return Err(DoaError::Config(format!(
            "source count {num_sources} must be below element count {m}"
        )));
    }
    let eig = r.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let pick = |idx: &[usize]| {
        let cols: Vec<CVector> = idx
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect();
        if cols.is_empty() {
            CMatrix::zeros(m, 0)
        } else {
            CMatrix::from_columns(&cols)
        }
    };
    let (sig, noise) = order.split_at(num_sources);
    let values = |idx: &[usize]| idx.iter().map(|&k| eig.eigenvalues[k]).collect::<Vec<_>>();
    let degenerate = num_sources > 0
        && (eig.eigenvalues[order[num_sources - 1]] - eig.eigenvalues[order[num_sources]]).abs()
            < DEGENERATE_GAP;

    Ok(SubspaceSplit {
        signal_basis: pick(sig),
        noise_basis: pick(noise),
        signal_eigenvalues: values(sig),
        noise_eigenvalues: values(noise),
        degenerate,
    })
}

/// Wraps an azimuth in radians into `[0, 2π)`.
pub fn wrap_azimuth(azimuth: f64) -> f64 {
    let w = azimuth.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frob(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn zenith_steering_is_all_ones() {
        let g = ArrayGeometry::uca_unit(12).unwrap();
        for az in [0.0, 1.0, 3.0, 6.0] {
            let a = steering_vector(&g, az, 0.0).unwrap();
            for z in a.iter() {
                assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn four_element_broadside_matches_scalar_formula() {
        let g = ArrayGeometry::uca(4, 1.0, 1.0).unwrap();
        let a = steering_vector(&g, 0.0, FRAC_PI_2).unwrap();
        for m in 1..=4 {
            let phase = -TAU * (TAU * m as f64 / 4.0).cos();
            let expected = Complex64::new(phase.cos(), phase.sin());
            assert!((a[m - 1] - expected).norm() < 1e-15);
            // phases are 0, 2π, 0, -2π
            assert!((a[m - 1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn steering_rejects_out_of_range_angles() {
        let g = ArrayGeometry::uca_unit(8).unwrap();
        assert!(steering_vector(&g, TAU, 0.3).is_err());
        assert!(steering_vector(&g, -0.1, 0.3).is_err());
        assert!(steering_vector(&g, 0.1, FRAC_PI_2 + 1e-9).is_err());
        assert!(steering_vector(&g, 0.1, FRAC_PI_2).is_ok());
    }

    #[test]
    fn geometry_validation() {
        assert!(ArrayGeometry::uca(1, 1.0, 1.0).is_err());
        assert!(ArrayGeometry::uca(4, 0.0, 1.0).is_err());
        assert!(ArrayGeometry::uca(4, 1.0, -1.0).is_err());
        let g = ArrayGeometry::uca_unit(6).unwrap();
        let az = g.element_azimuths();
        assert_eq!(az.len(), 6);
        assert!(az.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn ura_steering_is_unit_modulus() {
        let g = ArrayGeometry::ura(3, 4, 1.0, 0.5).unwrap();
        let a = steering_vector(&g, 1.1, 0.7).unwrap();
        assert_eq!(a.len(), 12);
        assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn source_set_validation() {
        assert!(SourceSet::unit_power(&[]).is_err());
        assert!(SourceSet::unit_power(&[(360.0, 10.0)]).is_err());
        assert!(SourceSet::unit_power(&[(10.0, 91.0)]).is_err());
        assert!(SourceSet::unit_power(&[(10.0, 20.0), (10.0, 20.0)]).is_err());
        assert!(SourceSet::new(vec![1.0], vec![2.0], vec![0.0]).is_err());
        assert!(SourceSet::new(vec![1.0], vec![2.0, 3.0], vec![1.0]).is_err());
    }

    #[test]
    fn noiseless_single_source_is_rank_one_in_steering_direction() {
        let g = ArrayGeometry::uca_unit(8).unwrap();
        let src = SourceSet::unit_power(&[(40.0, 30.0)]).unwrap();
        let x = synthesize_snapshots(&g, &src, f64::INFINITY, 20, 3).unwrap();
        let a = steering_vector(&g, 40f64.to_radians(), 30f64.to_radians()).unwrap();
        for t in 0..20 {
            let col = x.data().column(t);
            let k = col[0] / a[0];
            for i in 0..8 {
                assert!((col[i] - a[i] * k).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn synthesis_is_deterministic_per_seed() {
        let g = ArrayGeometry::uca_unit(12).unwrap();
        let src = SourceSet::unit_power(&[(30.0, 60.0), (120.0, 30.0)]).unwrap();
        let a = synthesize_snapshots(&g, &src, 5.0, 50, 99).unwrap();
        let b = synthesize_snapshots(&g, &src, 5.0, 50, 99).unwrap();
        let c = synthesize_snapshots(&g, &src, 5.0, 50, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(synthesize_snapshots(&g, &src, 5.0, 0, 1).is_err());
    }

    #[test]
    fn silent_sources_leave_white_noise_covariance() {
        // Law of large numbers: trace(R)/M -> σ² = 1 (unit reference power).
        let g = ArrayGeometry::uca_unit(6).unwrap();
        let src = SourceSet::unit_power(&[(30.0, 60.0)]).unwrap();
        let x = synthesize_snapshots(&g, &src, f64::NEG_INFINITY, 100_000, 7).unwrap();
        let r = sample_covariance(&x);
        let per_elem = r.trace().re / 6.0;
        assert!((per_elem - 1.0).abs() < 0.05, "trace/M = {per_elem}");
    }

    #[test]
    fn snr_sets_noise_variance() {
        let g = ArrayGeometry::uca_unit(4).unwrap();
        let src = SourceSet::unit_power(&[(30.0, 0.0)]).unwrap();
        // At zenith all elements see the same signal, so R = (p + σ²) on the
        // diagonal and p off-diagonal; trace/M ≈ 1 + σ², σ² = 0.1 at 10 dB.
        let x = synthesize_snapshots(&g, &src, 10.0, 200_000, 11).unwrap();
        let r = sample_covariance(&x);
        let per_elem = r.trace().re / 4.0;
        assert!((per_elem - 1.1).abs() < 0.02, "{per_elem}");
    }

    #[test]
    fn covariance_of_single_column_is_outer_product() {
        let x = CMatrix::from_column_slice(
            3,
            1,
            &[
                Complex64::new(1.0, 2.0),
                Complex64::new(-0.5, 0.0),
                Complex64::new(0.0, 3.0),
            ],
        );
        let r = sample_covariance(&SnapshotMatrix::new(x.clone()).unwrap());
        let outer = &x * x.adjoint();
        assert!(frob(&(r.clone() - outer)) < 1e-14);
        let split = subspace_split(&r, 1).unwrap();
        assert!(split.noise_eigenvalues.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn covariance_of_orthogonal_columns_matches_direct_product() {
        // Columns e_0 * 2 and e_1 * 2i: R = diag(2, 2, 0) exactly.
        let mut x = CMatrix::zeros(3, 2);
        x[(0, 0)] = Complex64::new(2.0, 0.0);
        x[(1, 1)] = Complex64::new(0.0, 2.0);
        let r = sample_covariance(&SnapshotMatrix::new(x).unwrap());
        let mut expected = CMatrix::zeros(3, 3);
        expected[(0, 0)] = Complex64::new(2.0, 0.0);
        expected[(1, 1)] = Complex64::new(2.0, 0.0);
        assert!(frob(&(r - expected)) < 1e-15);
    }

    #[test]
    fn diagonal_split() {
        let mut r = CMatrix::zeros(3, 3);
        r[(0, 0)] = Complex64::new(3.0, 0.0);
        r[(1, 1)] = Complex64::new(2.0, 0.0);
        r[(2, 2)] = Complex64::new(1.0, 0.0);
        let s = subspace_split(&r, 1).unwrap();
        assert!((s.signal_eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((s.noise_eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((s.noise_eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!((s.signal_basis[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(s.signal_basis[(1, 0)].norm() < 1e-14);
        assert!(!s.degenerate);
    }

    #[test]
    fn identity_split_is_flagged_degenerate() {
        let r = CMatrix::identity(4, 4);
        let s = subspace_split(&r, 2).unwrap();
        assert!(s.degenerate);
        assert!(frob(&(s.reconstruct() - r)) < 1e-12);
        assert_orthonormal(&s);
    }

    #[test]
    fn split_rejects_too_many_sources() {
        assert!(subspace_split(&CMatrix::identity(3, 3), 3).is_err());
    }

    #[test]
    fn noiseless_signal_subspace_contains_steering_vector() {
        let g = ArrayGeometry::uca_unit(8).unwrap();
        let src = SourceSet::unit_power(&[(200.0, 50.0)]).unwrap();
        let x = synthesize_snapshots(&g, &src, f64::INFINITY, 30, 1).unwrap();
        let s = subspace_split(&sample_covariance(&x), 1).unwrap();
        let a = steering_vector(&g, 200f64.to_radians(), 50f64.to_radians()).unwrap();
        let proj = s.signal_basis.adjoint() * &a;
        let energy = proj.iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert!((energy / 8.0 - 1.0).abs() * 8.0 < 1e-8);
    }

    #[test]
    fn noiseless_true_sources_are_orthogonal_to_noise_subspace() {
        let g = ArrayGeometry::uca_unit(12).unwrap();
        let angles = [(30.42, 60.39), (120.27, 29.42), (240.51, 45.55)];
        let src = SourceSet::unit_power(&angles).unwrap();
        let x = synthesize_snapshots(&g, &src, f64::INFINITY, 100, 5).unwrap();
        let s = subspace_split(&sample_covariance(&x), 3).unwrap();
        for (az, el) in angles {
            let a = steering_vector(&g, az.to_radians(), el.to_radians()).unwrap();
            let v = s.noise_basis.adjoint() * a;
            let q: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!(q < 1e-8, "{q}");
        }
    }

    fn assert_orthonormal(s: &SubspaceSplit) {
        let l = s.signal_basis.ncols();
        let n = s.noise_basis.ncols();
        let gs = s.signal_basis.adjoint() * &s.signal_basis;
        let gn = s.noise_basis.adjoint() * &s.noise_basis;
        assert!(frob(&(gs - CMatrix::identity(l, l))) < 1e-10);
        assert!(frob(&(gn - CMatrix::identity(n, n))) < 1e-10);
        assert!(frob(&(s.signal_basis.adjoint() * &s.noise_basis)) < 1e-10);
    }

    fn random_psd(m: usize, rank: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = CMatrix::from_fn(m, rank, |_, _| complex_gaussian(&mut rng, 1.0));
        &b * b.adjoint()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn steering_entries_have_unit_modulus(
            m in 2usize..40,
            r in 0.1f64..4.0,
            az in 0.0f64..TAU,
            el in 0.0f64..=FRAC_PI_2,
        ) {
            let g = ArrayGeometry::uca(m, 1.0, r).unwrap();
            let a = steering_vector(&g, az, el).unwrap();
            for z in a.iter() {
                prop_assert!((z.norm() - 1.0).abs() < 1e-12);
            }
            let gram = a.dotc(&a);
            prop_assert!((gram.re - m as f64).abs() < 1e-10);
        }

        #[test]
        fn split_invariants_hold_for_random_psd(
            m in 2usize..14,
            rank_frac in 0.0f64..1.0,
            l_frac in 0.0f64..1.0,
            seed in any::<u64>(),
        ) {
            let rank = 1 + (rank_frac * m as f64) as usize;
            let l = ((l_frac * m as f64) as usize).min(m - 1);
            let r = random_psd(m, rank.min(m), seed);
            let s = subspace_split(&r, l).unwrap();
            prop_assert_eq!(s.signal_basis.ncols(), l);
            prop_assert_eq!(s.noise_basis.ncols(), m - l);
            assert_orthonormal(&s);
            prop_assert!(frob(&(s.reconstruct() - &r)) < 1e-10 * (1.0 + frob(&r)));
            if let (Some(min_s), Some(max_n)) = (
                s.signal_eigenvalues.iter().copied().reduce(f64::min),
                s.noise_eigenvalues.iter().copied().reduce(f64::max),
            ) {
                prop_assert!(min_s >= max_n);
            }
            prop_assert!(s.signal_eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(s.noise_eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn covariance_trace_identity(m in 1usize..8, t in 1usize..20, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = CMatrix::from_fn(m, t, |_, _| complex_gaussian(&mut rng, 2.0));
            let energy: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / t as f64;
            let r = sample_covariance(&SnapshotMatrix::new(x).unwrap());
            prop_assert!((r.trace().re - energy).abs() < 1e-10 * (1.0 + energy));
            prop_assert!(frob(&(r.adjoint() - &r)) < 1e-12);
        }
    }
}
