use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Polar sample grid on the open unit disk.
///
/// Rings at each radius carry `angles` equally spaced points starting at
/// angle 0. `extra_random` adds seeded uniform points inside the largest ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub seed: u64,
    #[serde(default)]
    pub extra_random: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub radius: f64,
    pub angle: f64,
    pub z: Complex64,
}

impl GridPoint {
    pub fn polar(radius: f64, angle: f64) -> Self {
        GridPoint {
            radius,
            angle,
            z: Complex64::from_polar(radius, angle),
        }
    }
}

/// Real points `1 - 10^{-j}`, `j = 1..=5`.
pub const RADIAL_PROBES: [f64; 5] = [0.9, 0.99, 0.999, 0.9999, 0.99999];

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles: usize, seed: u64) -> Result<Self> {
        let g = DiskGrid {
            radii,
            angles,
            seed,
            extra_random: 0,
        };
        g.validate()?;
        Ok(g)
    }

    /// Radii {0.25, 0.5, 0.75, 0.9, 0.99, 0.999} with 128 angles each.
    pub fn default_grid() -> Self {
        DiskGrid {
            radii: vec![0.25, 0.5, 0.75, 0.9, 0.99, 0.999],
            angles: 128,
            seed: 0,
            extra_random: 0,
        }
    }

    /// Positive real axis only, one point per radius.
    pub fn radial(radii: Vec<f64>) -> Result<Self> {
        DiskGrid::new(radii, 1, 0)
    }

    pub fn radial_probes() -> Self {
        DiskGrid {
            radii: RADIAL_PROBES.to_vec(),
            angles: 1,
            seed: 0,
            extra_random: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.angles == 0 {
            return param("grid needs at least one angle per radius");
        }
        if self.radii.is_empty() && self.extra_random == 0 {
            return param("grid has no points");
        }
        if let Some(r) = self.radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return param(format!("grid radius {r} is outside (0, 1)"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles + self.extra_random
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points, sorted by `(radius, angle)`.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut pts = Vec::with_capacity(self.len());
        for &r in &self.radii {
            for j in 0..self.angles {
                pts.push(GridPoint::polar(r, TAU * j as f64 / self.angles as f64));
            }
        }
        if self.extra_random > 0 {
            let rmax = self.radii.iter().copied().fold(0.0, f64::max);
            let rmax = if rmax > 0.0 { rmax } else { 0.99 };
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            for _ in 0..self.extra_random {
                let r = rmax * rng.gen::<f64>().sqrt();
                let t = TAU * rng.gen::<f64>();
                if r > 0.0 {
                    pts.push(GridPoint::polar(r, t));
                }
            }
        }
        pts.sort_by(|a, b| a.radius.total_cmp(&b.radius).then(a.angle.total_cmp(&b.angle)));
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = DiskGrid::default_grid();
        assert_eq!(g.points().len(), 6 * 128);
        assert!(g.points().iter().all(|p| p.z.norm() < 1.0));
    }

    #[test]
    fn random_points_are_seeded() {
        let mut g = DiskGrid::new(vec![0.5], 4, 7).unwrap();
        g.extra_random = 10;
        assert_eq!(g.points(), g.points());
        let mut h = g.clone();
        h.seed = 8;
        assert_ne!(g.points(), h.points());
    }

    #[test]
    fn rejects_bad_radii() {
        assert!(DiskGrid::new(vec![1.0], 4, 0).is_err());
        assert!(DiskGrid::new(vec![0.5], 0, 0).is_err());
        assert!(DiskGrid::new(vec![], 4, 0).is_err());
    }
}
