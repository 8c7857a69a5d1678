use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::json;
use crate::linalg::matrix::{commutator_norm, diag, identity, min_eigenvalue, CMatrix, C64};
use crate::linalg::UnitaryOperator;
use crate::moments::grid_angle;
use crate::pair::CommutingUnitaryPair;

use super::naimark::NaimarkDilation;

/// Marginal spectral families on the big space. `f1[j]` is the family at
/// `t = 2πj/n₁`, so `f1[0] = 0` and `f1[n₁] = I`; likewise for `f2`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralFamilyPair {
    #[serde(rename = "F1_steps", with = "json::matrices")]
    f1: Vec<CMatrix>,
    #[serde(rename = "F2_steps", with = "json::matrices")]
    f2: Vec<CMatrix>,
}

impl SpectralFamilyPair {
    pub fn n1(&self) -> usize {
        self.f1.len() - 1
    }

    pub fn n2(&self) -> usize {
        self.f2.len() - 1
    }

    pub fn f1_steps(&self) -> &[CMatrix] {
        &self.f1
    }

    pub fn f2_steps(&self) -> &[CMatrix] {
        &self.f2
    }

    /// `max(‖F(0)‖, ‖F(2π) − I‖)` over both families.
    pub fn endpoint_residual(&self) -> f64 {
        let n = self.f1[0].nrows();
        [&self.f1, &self.f2]
            .iter()
            .map(|f| f[0].norm().max((f[f.len() - 1].clone() - identity(n)).norm()))
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of `F(t_{j+1}) − F(t_j)` over consecutive steps.
    pub fn monotonicity_margin(&self) -> f64 {
        [&self.f1, &self.f2]
            .iter()
            .flat_map(|f| f.windows(2).map(|w| min_eigenvalue(&(&w[1] - &w[0]))))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest commutator between a step of the first family and one of the second.
    pub fn commutation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.f1 {
            for b in &self.f2 {
                worst = worst.max(commutator_norm(a, b));
            }
        }
        worst
    }
}

/// `F₁(2πj/n₁) = Σ_{j' ≤ j} Σ_k F_{j'k}` and `F₂(2πk/n₂) = Σ_j Σ_{k' ≤ k} F_{jk'}`.
pub fn build_spectral_families(d: &NaimarkDilation, n1: usize, n2: usize) -> Result<SpectralFamilyPair> {
    if (n1, n2) != (d.n1(), d.n2()) {
        return Err(Error::GridMismatch(n1, n2, d.n1(), d.n2()));
    }
    let f1 = (0..=n1).map(|j| d.rectangle(1..j + 1, 1..n2 + 1)).collect();
    let f2 = (0..=n2).map(|k| d.rectangle(1..n1 + 1, 1..k + 1)).collect();
    Ok(SpectralFamilyPair { f1, f2 })
}

fn integrate_phase(steps: &[CMatrix]) -> CMatrix {
    let n = steps.len() - 1;
    let mut u = CMatrix::zeros(steps[0].nrows(), steps[0].ncols());
    for j in 1..=n {
        u += (&steps[j] - &steps[j - 1]) * C64::from_polar(1.0, grid_angle(j, n));
    }
    u
}

/// `U_k = ∫ e^{it} dF_k(t)`, with the embedding taken from the dilation.
pub fn build_commuting_unitaries(fam: &SpectralFamilyPair, d: &NaimarkDilation) -> Result<CommutingUnitaryPair> {
    if (fam.n1(), fam.n2()) != (d.n1(), d.n2()) || fam.f1[0].nrows() != d.big_dim() {
        return Err(Error::GridMismatch(fam.n1(), fam.n2(), d.n1(), d.n2()));
    }
    let u1 = UnitaryOperator::new(integrate_phase(&fam.f1))?;
    let u2 = UnitaryOperator::new(integrate_phase(&fam.f2))?;
    CommutingUnitaryPair::new(d.embedding().clone(), u1, u2)
}

/// The unitary with eigenvalue `e^{iθ}` on each block, for direct comparison.
pub fn blockwise_phases(d: &NaimarkDilation) -> (CMatrix, CMatrix) {
    let mut p1 = vec![C64::new(1.0, 0.0); d.big_dim()];
    let mut p2 = p1.clone();
    for ((j, k), range) in d.blocks() {
        for i in range {
            p1[i] = C64::from_polar(1.0, grid_angle(j, d.n1()));
            p2[i] = C64::from_polar(1.0, grid_angle(k, d.n2()));
        }
    }
    (diag(&p1), diag(&p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::naimark::naimark_dilate;
    use crate::linalg::joint_eigendecomposition;
    use crate::linalg::matrix::{c64, ONE};
    use crate::moments::GridOperatorMeasure;
    use std::f64::consts::{PI, TAU};

    fn scalar(n1: usize, n2: usize, w: &[f64]) -> GridOperatorMeasure {
        let atoms = w.iter().map(|&x| CMatrix::from_element(1, 1, c64(x, 0.0))).collect();
        GridOperatorMeasure::new(n1, n2, 1, atoms).unwrap()
    }

    #[test]
    fn single_cell_steps_at_its_angle() {
        let d = naimark_dilate(&scalar(2, 2, &[0.0, 0.0, 1.0, 0.0])).unwrap();
        let f = build_spectral_families(&d, 2, 2).unwrap();
        assert_eq!(f.f1_steps()[1][(0, 0)], c64(0.0, 0.0));
        assert_eq!(f.f1_steps()[2][(0, 0)], ONE);
        assert_eq!(f.f2_steps()[1][(0, 0)], ONE);
        let pair = build_commuting_unitaries(&f, &d).unwrap();
        assert!((pair.u1().matrix()[(0, 0)] - ONE).norm() < 1e-15);
        assert!((pair.u2().matrix()[(0, 0)] + ONE).norm() < 1e-15);
    }

    #[test]
    fn equal_quarters_have_half_trace_at_pi() {
        let d = naimark_dilate(&scalar(2, 2, &[0.25; 4])).unwrap();
        let f = build_spectral_families(&d, 2, 2).unwrap();
        assert!((f.f1_steps()[1].trace() - c64(2.0, 0.0)).norm() < 1e-15);
        assert!(f.endpoint_residual() < 1e-15);
        assert!(f.monotonicity_margin() > -1e-15);
        assert!(f.commutation_residual() < 1e-15);
    }

    #[test]
    fn halves_at_pi_and_two_pi() {
        let d = naimark_dilate(&scalar(2, 2, &[0.5, 0.0, 0.0, 0.5])).unwrap();
        let f = build_spectral_families(&d, 2, 2).unwrap();
        let pair = build_commuting_unitaries(&f, &d).unwrap();
        let expected = diag(&[-ONE, ONE]);
        assert!((pair.u1().matrix() - &expected).norm() < 1e-15);
        assert!((pair.u2().matrix() - &expected).norm() < 1e-15);
        let atoms = joint_eigendecomposition(pair.u1(), pair.u2()).unwrap();
        let mut angles: Vec<(f64, f64)> = atoms.iter().map(|a| (a.theta1, a.theta2)).collect();
        angles.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!((angles[0].0 - PI).abs() < 1e-12 && (angles[1].1 - TAU).abs() < 1e-12);
    }

    #[test]
    fn grid_mismatch_reported() {
        let d = naimark_dilate(&scalar(2, 1, &[0.5, 0.5])).unwrap();
        assert!(matches!(build_spectral_families(&d, 4, 1), Err(Error::GridMismatch(..))));
    }
}
