use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::linalg::matrix::{ExtPoint, C64, IMAG, ONE};
use crate::pair::limits::extended_eval;
use crate::pair::PairSampler;
use crate::tol;

use super::measure::GridScalarMeasure;

/// `¼(m₁ − m₂ + i m₃ − i m₄)` for the measures of `h+g, h−g, h+ig, h−ig`.
pub fn polarize(parts: [&GridScalarMeasure; 4]) -> Result<GridScalarMeasure> {
    GridScalarMeasure::combine(&[
        (ONE * 0.25, parts[0]),
        (-ONE * 0.25, parts[1]),
        (IMAG * 0.25, parts[2]),
        (-IMAG * 0.25, parts[3]),
    ])
}

/// `max |μ_{g,h}(δ) − conj μ_{h,g}(δ)|` over atoms.
pub fn hermitian_symmetry_check(mu_hg: &GridScalarMeasure, mu_gh: &GridScalarMeasure) -> Result<f64> {
    mu_hg.same_grid(mu_gh)?;
    Ok(mu_hg
        .cells()
        .zip(mu_gh.cells())
        .map(|((_, _, a), (_, _, b))| (b - a.conj()).norm())
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub enum UniquenessVerdict {
    /// `Δ = g₁ − g₂ + i g₃ − i g₄` vanishes on the grid; `combination_max` is the
    /// largest atom of `σ₁ − σ₂ + iσ₃ − iσ₄`, which must then vanish as well.
    Vanishing { delta_max: f64, combination_max: f64, consistent: bool },
    /// A sample point where `Δ` is visibly nonzero.
    Witness { z1: ExtPoint, z2: ExtPoint, delta: C64 },
}

/// Checks that the combination `g₁ − g₂ + i g₃ − i g₄` of the kernel sums
/// vanishes only when the same combination of the measures does.
pub fn uniqueness_witness(
    sigmas: [&GridScalarMeasure; 4],
    samplers: [&dyn PairSampler; 4],
    grid: &SampleGrid,
) -> Result<UniquenessVerdict> {
    let combination = polarize(sigmas)?;
    let combination_max = 4.0 * combination.max_abs();
    if samplers.iter().any(|s| s.dim() != 1) {
        return Err(Error::Shape("uniqueness test needs scalar functions".into()));
    }
    let pts = grid.pair_points().points;
    let coeff = [ONE, -ONE, IMAG, -IMAG];
    let rows: Vec<Result<(f64, ExtPoint, ExtPoint, C64)>> = pts
        .par_iter()
        .map(|&a| {
            let mut best = (0.0, a, a, C64::new(0.0, 0.0));
            for &b in &pts {
                let mut d = C64::new(0.0, 0.0);
                for (c, s) in coeff.iter().zip(samplers.iter()) {
                    d += c * extended_eval(*s, a, b)?[(0, 0)];
                }
                if d.norm() > best.0 {
                    best = (d.norm(), a, b, d);
                }
            }
            Ok(best)
        })
        .collect();
    let mut best = (0.0, ExtPoint::Infinity, ExtPoint::Infinity, C64::new(0.0, 0.0));
    for r in rows {
        let r = r?;
        if r.0 > best.0 {
            best = r;
        }
    }
    if best.0 <= tol::MOMENT {
        Ok(UniquenessVerdict::Vanishing {
            delta_max: best.0,
            combination_max,
            consistent: combination_max <= tol::MOMENT,
        })
    } else {
        Ok(UniquenessVerdict::Witness {
            z1: best.1,
            z2: best.2,
            delta: best.3,
        })
    }
}

/// [`uniqueness_witness`] with each `g_j` the kernel sum of `σ_j`.
pub fn uniqueness_witness_for(sigmas: [&GridScalarMeasure; 4], grid: &SampleGrid) -> Result<UniquenessVerdict> {
    uniqueness_witness(sigmas, [sigmas[0], sigmas[1], sigmas[2], sigmas[3]], grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::CVector;
    use crate::linalg::CMatrix;
    use crate::moments::measure::GridOperatorMeasure;

    #[test]
    fn polarization_recovers_off_diagonal() {
        let mut p = CMatrix::zeros(2, 2);
        p[(0, 0)] = ONE;
        let atoms = vec![p.clone(), crate::linalg::identity(2) - p];
        let e = GridOperatorMeasure::new(1, 2, 2, atoms).unwrap();
        let h = CVector::from_vec(vec![ONE, C64::new(0.0, 0.0)]);
        let g = CVector::from_vec(vec![C64::new(0.0, 0.0), ONE]);
        let parts = [&h + &g, &h - &g, &h + &g * IMAG, &h - &g * IMAG].map(|v| e.scalar_measure(&v, &v));
        let mu = polarize([&parts[0], &parts[1], &parts[2], &parts[3]]).unwrap();
        assert!(mu.max_abs() < 1e-15);
    }

    #[test]
    fn grid_mismatch() {
        let a = GridScalarMeasure::zeros(2, 2);
        let b = GridScalarMeasure::zeros(4, 2);
        assert!(matches!(polarize([&a, &a, &a, &b]), Err(Error::GridMismatch(..))));
        assert!(hermitian_symmetry_check(&a, &b).is_err());
    }

    #[test]
    fn perturbation_detected() {
        let a = GridScalarMeasure::atom(2, 2, 1, 2, C64::new(0.3, 0.1));
        let mut b = GridScalarMeasure::atom(2, 2, 1, 2, C64::new(0.3, -0.1));
        assert!(hermitian_symmetry_check(&a, &b).unwrap() < 1e-16);
        b.set(2, 2, C64::new(1e-3, 0.0));
        assert!((hermitian_symmetry_check(&a, &b).unwrap() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn single_atom_difference_has_witness() {
        let s1 = GridScalarMeasure::atom(2, 2, 1, 1, ONE);
        let s2 = GridScalarMeasure::zeros(2, 2);
        let grid = SampleGrid::with_angles(4).unwrap();
        let v = uniqueness_witness_for([&s1, &s2, &s2, &s2], &grid).unwrap();
        assert!(matches!(v, UniquenessVerdict::Witness { .. }));
        let v = uniqueness_witness_for([&s1, &s1, &s2, &s2], &grid).unwrap();
        assert!(matches!(v, UniquenessVerdict::Vanishing { consistent: true, .. }));
    }
}
