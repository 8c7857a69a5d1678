use rayon::prelude::*;

use crate::error::Result;
use crate::grid::SampleGrid;
use crate::linalg::joint::joint_eigendecomposition;
use crate::linalg::matrix::{identity, min_eigenvalue, quadratic_form, CMatrix, CVector, ExtPoint};
use crate::linalg::unitary::herglotz_kernel;

use super::commuting::{pair_resolvent, CommutingUnitaryPair};

/// One atom of the spectral function: a point of `(0, 2π]²` with its compressed weight.
#[derive(Clone, Debug)]
pub struct SpectralAtom {
    pub theta1: f64,
    pub theta2: f64,
    pub weight: CMatrix,
}

/// The spectral function of a pair as a finite list of atoms on `H`.
#[derive(Clone, Debug)]
pub struct SpectralFunctionAtlas {
    pub dim: usize,
    pub atoms: Vec<SpectralAtom>,
}

impl SpectralFunctionAtlas {
    /// `𝐄_{t₁,t₂} = Σ_{θ₁ ≤ t₁, θ₂ ≤ t₂} weight`.
    pub fn distribution(&self, t1: f64, t2: f64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for a in self.atoms.iter().filter(|a| a.theta1 <= t1 && a.theta2 <= t2) {
            acc += &a.weight;
        }
        acc
    }

    /// `‖Σ weights − I‖_F`.
    pub fn normalization_residual(&self) -> f64 {
        let mut acc = -identity(self.dim);
        for a in &self.atoms {
            acc += &a.weight;
        }
        acc.norm()
    }

    /// Smallest eigenvalue over all weights.
    pub fn min_weight_eigenvalue(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| min_eigenvalue(&a.weight))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest eigenvalue of the increments of `𝐄` between consecutive step
    /// points, in each variable separately.
    pub fn monotonicity_margin(&self) -> f64 {
        let mut t1: Vec<f64> = self.atoms.iter().map(|a| a.theta1).collect();
        let mut t2: Vec<f64> = self.atoms.iter().map(|a| a.theta2).collect();
        for t in [&mut t1, &mut t2] {
            t.sort_by(f64::total_cmp);
            t.dedup();
            t.insert(0, 0.0);
        }
        let mut worst = f64::INFINITY;
        for w in t1.windows(2) {
            for &s in &t2 {
                let d = self.distribution(w[1], s) - self.distribution(w[0], s);
                worst = worst.min(min_eigenvalue(&d));
            }
        }
        for w in t2.windows(2) {
            for &s in &t1 {
                let d = self.distribution(s, w[1]) - self.distribution(s, w[0]);
                worst = worst.min(min_eigenvalue(&d));
            }
        }
        worst
    }

    /// `Σ K(z₁,θ₁) K(z₂,θ₂) (weight h, h)`.
    pub fn integrate(&self, z1: ExtPoint, z2: ExtPoint, h: &CVector) -> num_complex::Complex64 {
        self.atoms
            .iter()
            .map(|a| herglotz_kernel(z1, a.theta1) * herglotz_kernel(z2, a.theta2) * quadratic_form(&a.weight, h))
            .sum()
    }
}

/// Atoms of the joint spectral measure of `(U₁, U₂)` compressed to `H`.
pub fn spectral_function(pair: &CommutingUnitaryPair) -> Result<SpectralFunctionAtlas> {
    let atoms = joint_eigendecomposition(pair.u1(), pair.u2())?
        .into_iter()
        .map(|a| SpectralAtom {
            theta1: a.theta1,
            theta2: a.theta2,
            weight: pair.space().compress(&a.projector),
        })
        .collect();
    Ok(SpectralFunctionAtlas {
        dim: pair.small_dim(),
        atoms,
    })
}

/// Largest deviation between `(R_{z₁,z₂} h, h)` and the atomic integral of the
/// spectral function over the two-variable point set of `grid`.
pub fn check_integral_representation(pair: &CommutingUnitaryPair, h: &CVector, grid: &SampleGrid) -> Result<f64> {
    let atlas = spectral_function(pair)?;
    let points = grid.pair_points().points;
    let rows: Vec<Result<f64>> = points
        .par_iter()
        .map(|&a| {
            let mut worst = 0.0f64;
            for &b in &points {
                let r = pair_resolvent(pair, a, b)?;
                let lhs = quadratic_form(&r, h);
                worst = worst.max((lhs - atlas.integrate(a, b, h)).norm());
            }
            Ok(worst)
        })
        .collect();
    rows.into_iter().try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}
