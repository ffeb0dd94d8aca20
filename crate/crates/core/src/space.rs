//! The (azimuth, elevation) search space, in degrees.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DoaError, Result};

/// A candidate direction `(θ, φ)` in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub theta: f64,
    pub phi: f64,
}

impl Point {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Flat Euclidean distance in degree units. Azimuth is not wrapped.
    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }

    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dt = self.theta - other.theta;
        let dp = self.phi - other.phi;
        dt * dt + dp * dp
    }

    pub(crate) fn coord(&self, axis: usize) -> f64 {
        match axis {
            0 => self.theta,
            _ => self.phi,
        }
    }

    pub(crate) fn set_coord(&mut self, axis: usize, v: f64) {
        match axis {
            0 => self.theta = v,
            _ => self.phi = v,
        }
    }
}

/// Absolute azimuth difference on the circle, in `[0, 180]` degrees.
pub fn circular_azimuth_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Something to maximize over the search box.
pub trait Objective {
    fn evaluate(&self, p: Point) -> f64;
}

impl<F: Fn(Point) -> f64> Objective for F {
    fn evaluate(&self, p: Point) -> f64 {
        self(p)
    }
}

/// Axis-aligned bounds on `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub theta: (f64, f64),
    pub phi: (f64, f64),
}

impl Default for SearchBox {
    fn default() -> Self {
        Self {
            theta: (0.0, 360.0),
            phi: (0.0, 90.0),
        }
    }
}

impl SearchBox {
    pub fn new(theta: (f64, f64), phi: (f64, f64)) -> Result<Self> {
        let b = Self { theta, phi };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("theta", self.theta), ("phi", self.phi)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(DoaError::Config(format!(
                    "{name} bounds must satisfy lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    fn bounds(&self, axis: usize) -> (f64, f64) {
        match axis {
            0 => self.theta,
            _ => self.phi,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (self.theta.0..=self.theta.1).contains(&p.theta)
            && (self.phi.0..=self.phi.1).contains(&p.phi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point::new(
            rng.gen_range(self.theta.0..=self.theta.1),
            rng.gen_range(self.phi.0..=self.phi.1),
        )
    }

    /// Mirrors a point back into the box, repeatedly if needed.
    ///
    /// `v < lo` maps to `lo + (lo - v)`, `v > hi` to `hi - (v - hi)`, until inside.
    pub fn reflect(&self, p: Point) -> Point {
        let mut out = p;
        for axis in 0..2 {
            let (lo, hi) = self.bounds(axis);
            out.set_coord(axis, reflect_into(p.coord(axis), lo, hi));
        }
        out
    }
}

fn reflect_into(v: f64, lo: f64, hi: f64) -> f64 {
    if (lo..=hi).contains(&v) {
        return v;
    }
    let width = hi - lo;
    // Repeated mirroring is periodic with period 2w.
    let t = (v - lo).rem_euclid(2.0 * width);
    let folded = if t > width { 2.0 * width - t } else { t };
    (lo + folded).clamp(lo, hi)
}
