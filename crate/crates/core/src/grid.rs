//! Sample grids over the complement of the unit circle.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{mirror, C64, ExtPoint};

/// Polar grid `{r e^{2πik/m}}` inside the disk, together with its mirror
/// image `1/z̄` outside.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            radii: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            angles: 8,
        }
    }
}

impl SampleGrid {
    pub fn new(radii: Vec<f64>, angles: usize) -> Result<Self> {
        if angles == 0 || radii.is_empty() {
            return Err(Error::InvalidSpec("sample grid must be non-empty".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidSpec("grid radii must lie in (0, 1)".into()));
        }
        Ok(Self { radii, angles })
    }

    /// A coarser grid with the default radii and `angles` directions.
    pub fn with_angles(angles: usize) -> Result<Self> {
        Self::new(Self::default().radii, angles)
    }

    /// Interior points, radius-major.
    pub fn interior(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.radii.len() * self.angles);
        for &r in &self.radii {
            for k in 0..self.angles {
                out.push(C64::from_polar(r, TAU * k as f64 / self.angles as f64));
            }
        }
        out
    }

    /// Mirror images `1/z̄` of the interior points, in the same order.
    pub fn exterior(&self) -> Vec<C64> {
        self.interior().into_iter().map(mirror).collect()
    }

    /// `0`, the interior points and their mirrors.
    pub fn finite_points(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0)];
        out.extend(self.interior());
        out.extend(self.exterior());
        out
    }

    /// The two-variable point set: `0`, interior, exterior and `∞`.
    pub fn pair_points(&self) -> PairPoints {
        let interior = self.interior();
        let m = interior.len();
        let mut points = Vec::with_capacity(2 * m + 2);
        points.push(ExtPoint::Finite(C64::new(0.0, 0.0)));
        points.extend(interior.iter().map(|&z| ExtPoint::Finite(z)));
        points.extend(interior.iter().map(|&z| ExtPoint::Finite(mirror(z))));
        points.push(ExtPoint::Infinity);
        let last = points.len() - 1;
        let mirror_of = (0..points.len())
            .map(|i| match i {
                0 => last,
                i if i == last => 0,
                i if i <= m => i + m,
                i => i - m,
            })
            .collect();
        PairPoints {
            points,
            mirror_of,
            interior_count: m,
        }
    }
}

/// Points of one variable used by the two-variable checks, with the index of
/// each point's mirror.
#[derive(Clone, Debug)]
pub struct PairPoints {
    pub points: Vec<ExtPoint>,
    pub mirror_of: Vec<usize>,
    interior_count: usize,
}

impl PairPoints {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn infinity_index(&self) -> usize {
        self.points.len() - 1
    }

    /// Indices of the points in the open disk, `0` included.
    pub fn disk_indices(&self) -> std::ops::Range<usize> {
        0..self.interior_count + 1
    }

    /// Indices of the nonzero interior points.
    pub fn interior_indices(&self) -> std::ops::Range<usize> {
        1..self.interior_count + 1
    }
}
