use nalgebra::linalg::LU;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::json;
use super::matrix::{check_off_circle, identity, CMatrix, ExtPoint, C64, ONE};
use crate::error::{Error, Result};
use crate::tol;

/// A square matrix with `UᴴU = UUᴴ = I`.
#[derive(Clone, Debug)]
pub struct UnitaryOperator(CMatrix);

impl UnitaryOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!(
                "unitary must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !super::matrix::all_finite(&m) {
            return Err(Error::NonFinite);
        }
        let residual = unitarity_residual(&m);
        if residual > tol::ORTHO {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn inverse(&self) -> UnitaryOperator {
        Self(self.0.adjoint())
    }
}

impl Serialize for UnitaryOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::matrix::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for UnitaryOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = json::matrix::deserialize(d)?;
        UnitaryOperator::new(m).map_err(D::Error::custom)
    }
}

/// `max(‖UᴴU − I‖_F, ‖UUᴴ − I‖_F)`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let a = (m.adjoint() * m - identity(n)).norm();
    let b = (m * m.adjoint() - identity(n)).norm();
    a.max(b)
}

/// For unitary `U`, the condition number of `I − zU` is at most
/// `(1 + |z|) / ||z| − 1|`.
fn bracket_condition_bound(z: C64) -> f64 {
    let r = z.norm();
    (1.0 + r) / (r - 1.0).abs()
}

/// Solves `(I − zU) X = rhs`.
pub fn resolvent_solve(u: &UnitaryOperator, z: C64, rhs: &CMatrix) -> Result<CMatrix> {
    check_off_circle(z)?;
    let kappa = bracket_condition_bound(z);
    if kappa > tol::KAPPA_MAX {
        return Err(Error::SingularResolvent(kappa));
    }
    let n = u.dim();
    if n == 0 {
        return Ok(rhs.clone());
    }
    let bracket = identity(n) - u.matrix() * z;
    LU::new(bracket)
        .solve(rhs)
        .ok_or(Error::SingularResolvent(f64::INFINITY))
}

/// `(I − zU)⁻¹`.
pub fn unitary_resolvent(u: &UnitaryOperator, z: C64) -> Result<CMatrix> {
    resolvent_solve(u, z, &identity(u.dim()))
}

/// `U(z) X = (I + zU)(I − zU)⁻¹ X = −X + 2 (I − zU)⁻¹ X`, with `U(∞) = −I`.
pub fn cayley_apply(u: &UnitaryOperator, z: ExtPoint, rhs: &CMatrix) -> Result<CMatrix> {
    match z {
        ExtPoint::Infinity => Ok(-rhs),
        ExtPoint::Finite(z) => {
            let solved = resolvent_solve(u, z, rhs)?;
            Ok(solved.scale(2.0) - rhs)
        }
    }
}

/// The Cayley-type transform `U(z) = (I + zU)(I − zU)⁻¹` for `|z| ≠ 1`,
/// extended by `U(∞) = −I`.
pub fn cayley_transform(u: &UnitaryOperator, z: impl Into<ExtPoint>) -> Result<CMatrix> {
    cayley_apply(u, z.into(), &identity(u.dim()))
}

/// The scalar kernel `(1 + z e^{iθ}) / (1 − z e^{iθ})`, equal to `−1` at `z = ∞`.
pub fn herglotz_kernel(z: ExtPoint, theta: f64) -> C64 {
    match z {
        ExtPoint::Infinity => -ONE,
        ExtPoint::Finite(z) => {
            let w = z * C64::from_polar(1.0, theta);
            (ONE + w) / (ONE - w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c64, min_eigenvalue, mirror, IMAG};
    use approx::assert_abs_diff_eq;

    fn scalar(z: C64) -> UnitaryOperator {
        UnitaryOperator::new(CMatrix::from_element(1, 1, z)).unwrap()
    }

    #[test]
    fn scalar_examples() {
        let one = scalar(ONE);
        assert_abs_diff_eq!((cayley_transform(&one, 0.0).unwrap()[(0, 0)] - ONE).norm(), 0.0);
        assert_abs_diff_eq!(
            (cayley_transform(&one, 0.5).unwrap()[(0, 0)] - c64(3.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        let i = scalar(IMAG);
        assert_abs_diff_eq!(
            (cayley_transform(&i, 0.5).unwrap()[(0, 0)] - c64(0.6, 0.8)).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert_eq!(cayley_transform(&i, ExtPoint::Infinity).unwrap()[(0, 0)], -ONE);
    }

    #[test]
    fn circle_argument_is_an_error() {
        let u = scalar(ONE);
        assert!(matches!(
            cayley_transform(&u, c64(0.0, 1.0)),
            Err(Error::UnitModulusArgument(_))
        ));
    }

    #[test]
    fn adjoint_and_positivity_identities() {
        let s = 1.0 / 2f64.sqrt();
        let u = UnitaryOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c64(s, 0.0), c64(0.0, s), c64(0.0, s), c64(s, 0.0)],
        ))
        .unwrap();
        let z = c64(0.3, -0.5);
        let a = cayley_transform(&u, z).unwrap();
        let b = cayley_transform(&u, mirror(z)).unwrap();
        assert_abs_diff_eq!((a.adjoint() + &b).norm(), 0.0, epsilon = 1e-13);
        assert!(min_eigenvalue(&(a - b)) > -1e-12);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = CMatrix::from_element(1, 1, c64(2.0, 0.0));
        assert!(matches!(UnitaryOperator::new(m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn kernel_matches_scalar_cayley() {
        let theta = 1.1;
        let z = c64(0.2, 0.7);
        let u = scalar(C64::from_polar(1.0, theta));
        let k = herglotz_kernel(z.into(), theta);
        assert_abs_diff_eq!((cayley_transform(&u, z).unwrap()[(0, 0)] - k).norm(), 0.0, epsilon = 1e-14);
    }
}
