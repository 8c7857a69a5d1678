use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::linalg::matrix::{check_off_circle, identity, mirror, CMatrix, ExtPoint, C64};
use crate::linalg::unitary::cayley_transform;
use crate::pair::PairSampler;
use crate::single::{chumakin_resolvent, SchurParameter};

use super::pair::{svu_membership, IsoUnitaryPair};

/// The generalized resolvent of an isometry–unitary pair attached to a
/// parameter `Φ` of the commuting class:
/// `R_{z₁,z₂} = (−I + 2[I − z₁(V ⊕ Φ_{z₁})]⁻¹) U(z₂)` for `|z₁| < 1`, and
/// `R_{z₁,z₂} = R_{1/z̄₁, 1/z̄₂}ᴴ` for `|z₁| > 1` and `z₁ = ∞`.
#[derive(Clone, Debug)]
pub struct IsoUnitaryResolvent {
    pair: IsoUnitaryPair,
    phi: SchurParameter,
    membership_residual: f64,
}

impl IsoUnitaryResolvent {
    /// Fails with `NotInClass` unless `Φ` passes the membership test on `grid`.
    pub fn new(pair: IsoUnitaryPair, phi: SchurParameter, grid: &SampleGrid) -> Result<Self> {
        let membership_residual = svu_membership(&pair, &phi, grid)?;
        Ok(Self {
            pair,
            phi,
            membership_residual,
        })
    }

    pub fn pair(&self) -> &IsoUnitaryPair {
        &self.pair
    }

    pub fn parameter(&self) -> &SchurParameter {
        &self.phi
    }

    pub fn membership_residual(&self) -> f64 {
        self.membership_residual
    }

    /// `−I + 2𝐑_{z₁}(V)`, the first factor: the Chumakin bracket inside the
    /// disk and `I − 2𝐑_{1/z̄₁}ᴴ` outside it.
    pub fn first_factor(&self, z1: ExtPoint) -> Result<CMatrix> {
        let n = self.pair.dim();
        match z1 {
            ExtPoint::Infinity => Ok(-identity(n)),
            ExtPoint::Finite(z) => {
                check_off_circle(z)?;
                if z.norm() < 1.0 {
                    Ok(chumakin_resolvent(self.pair.v(), &self.phi, z)?.scale(2.0) - identity(n))
                } else {
                    let inner = chumakin_resolvent(self.pair.v(), &self.phi, mirror(z))?;
                    Ok(identity(n) - inner.adjoint().scale(2.0))
                }
            }
        }
    }

    /// `U(z₂)`, with `U(∞) = −I`.
    pub fn second_factor(&self, z2: ExtPoint) -> Result<CMatrix> {
        cayley_transform(self.pair.u(), z2)
    }

    pub fn value(&self, z1: ExtPoint, z2: ExtPoint) -> Result<CMatrix> {
        if z1.is_interior() {
            Ok(self.first_factor(z1)? * self.second_factor(z2)?)
        } else {
            if let ExtPoint::Finite(z) = z1 {
                check_off_circle(z)?;
            }
            if let ExtPoint::Finite(z) = z2 {
                check_off_circle(z)?;
            }
            Ok(self.value(z1.mirror(), z2.mirror())?.adjoint())
        }
    }
}

impl PairSampler for IsoUnitaryResolvent {
    fn dim(&self) -> usize {
        self.pair.dim()
    }

    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        self.value(z1.into(), z2.into())
    }

    fn eval_exact(&self, z1: ExtPoint, z2: ExtPoint) -> Option<Result<CMatrix>> {
        Some(self.value(z1, z2))
    }
}

/// One value of the resolvent; the membership test is repeated on every call.
pub fn build_iso_unitary_resolvent(
    pair: &IsoUnitaryPair,
    phi: &SchurParameter,
    z1: impl Into<ExtPoint>,
    z2: impl Into<ExtPoint>,
) -> Result<CMatrix> {
    let r = IsoUnitaryResolvent::new(pair.clone(), phi.clone(), &SampleGrid::default())?;
    r.value(z1.into(), z2.into())
}

/// `max ‖R_{z₁,z₂} − U(z₂)(−I + 2𝐑_{z₁}(V))‖_F` over the two-variable sample points.
pub fn two_sided_residual(r: &IsoUnitaryResolvent, grid: &SampleGrid) -> Result<f64> {
    let pts = grid.pair_points().points;
    let mut worst = 0.0f64;
    for &a in &pts {
        let first = r.first_factor(a)?;
        for &b in &pts {
            let other = r.second_factor(b)? * &first;
            worst = worst.max((r.value(a, b)? - other).norm());
        }
    }
    Ok(worst)
}

/// `max_z ‖R_{z,0} − R'_{z,0}‖_F` over the disk grid and its mirror.
pub fn separation(a: &IsoUnitaryResolvent, b: &IsoUnitaryResolvent, grid: &SampleGrid) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Shape("resolvents act on different spaces".into()));
    }
    let zero = ExtPoint::from(0.0);
    let mut worst = 0.0f64;
    for z in grid.finite_points() {
        worst = worst.max((a.value(z.into(), zero)? - b.value(z.into(), zero)?).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c64, ONE};
    use crate::linalg::subspace::Subspace;
    use crate::linalg::UnitaryOperator;
    use crate::pair::verify_theorem_3_2;
    use crate::random::random_iso_unitary;
    use crate::single::schur::scalar_parameter;
    use crate::single::PartialIsometry;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_pair(beta: f64) -> IsoUnitaryPair {
        let u = UnitaryOperator::new(CMatrix::from_element(1, 1, C64::from_polar(1.0, beta))).unwrap();
        IsoUnitaryPair::new(PartialIsometry::trivial(1), u).unwrap()
    }

    #[test]
    fn origin_gives_identity() {
        let pair = scalar_pair(0.4);
        let phi = SchurParameter::zero(Subspace::full(1), Subspace::full(1));
        let r = IsoUnitaryResolvent::new(pair, phi, &SampleGrid::default()).unwrap();
        assert!((r.value(0.0.into(), 0.0.into()).unwrap() - identity(1)).norm() < 1e-15);
    }

    #[test]
    fn zero_parameter_leaves_cayley_factor() {
        let beta = 1.3;
        let pair = scalar_pair(beta);
        let phi = SchurParameter::zero(Subspace::full(1), Subspace::full(1));
        let r = IsoUnitaryResolvent::new(pair, phi, &SampleGrid::default()).unwrap();
        for (z1, z2) in [(c64(0.3, 0.1), c64(-0.2, 0.5)), (c64(2.0, 1.0), c64(0.1, 0.0))] {
            let w = z2 * C64::from_polar(1.0, beta);
            let expected = (ONE + w) / (ONE - w);
            let got = r.value(z1.into(), z2.into()).unwrap()[(0, 0)];
            // Outside the disk the first factor is −I.
            let sign = if z1.norm() < 1.0 { 1.0 } else { -1.0 };
            assert!((got - expected * sign).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_parameter_on_trivial_isometry() {
        let c = c64(0.3, -0.4);
        let pair = IsoUnitaryPair::new(PartialIsometry::trivial(1), UnitaryOperator::identity(1)).unwrap();
        let phi = scalar_parameter(c, Subspace::full(1), Subspace::full(1)).unwrap();
        let r = IsoUnitaryResolvent::new(pair, phi, &SampleGrid::default()).unwrap();
        let z = c64(0.5, 0.2);
        let expected = (ONE + c * z) / (ONE - c * z);
        assert!((r.value(z.into(), 0.0.into()).unwrap()[(0, 0)] - expected).norm() < 1e-14);
    }

    #[test]
    fn zero_second_argument_outside_matches_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let inst = random_iso_unitary(&mut rng, 4);
        let pair = IsoUnitaryPair::new(inst.v, inst.u).unwrap();
        let phi = SchurParameter::zero(pair.v().defect_domain(), pair.v().defect_range());
        let r = IsoUnitaryResolvent::new(pair, phi, &SampleGrid::default()).unwrap();
        let z1 = ExtPoint::from(c64(1.5, -0.8));
        let at_zero = r.value(z1, 0.0.into()).unwrap();
        for eps in [1e-3, 1e-4] {
            let near = r.value(z1, c64(eps, 0.0).into()).unwrap();
            assert!((near - &at_zero).norm() < 10.0 * eps);
        }
        let tiny = r.value(z1, c64(1e-9, 0.0).into()).unwrap();
        assert!((tiny - at_zero).norm() < 1e-6);
    }

    #[test]
    fn random_instances_are_pair_resolvents() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let grid = SampleGrid::with_angles(4).unwrap();
        for n in [2, 3, 4] {
            let inst = random_iso_unitary(&mut rng, n);
            let pair = IsoUnitaryPair::new(inst.v.clone(), inst.u.clone()).unwrap();
            let phi = SchurParameter::zero(pair.v().defect_domain(), pair.v().defect_range());
            let r = IsoUnitaryResolvent::new(pair, phi, &grid).unwrap();
            assert!(r.membership_residual() < 1e-10);
            let u_iso = PartialIsometry::from_unitary(&inst.u);
            let report = verify_theorem_3_2(&inst.v, &u_iso, &r, &grid).unwrap();
            assert!(report.overall_pass, "{report:?}");
            assert!(two_sided_residual(&r, &grid).unwrap() < 1e-9);
        }
    }
}
