use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::json;
use super::matrix::{identity, CMatrix, CVector};
use super::unitary::unitarity_residual;
use crate::error::{Error, Result};
use crate::tol;

/// An antilinear involution `x ↦ M x̄` given by a symmetric unitary `M`.
///
/// `M` unitary and `Mᵀ = M` together are equivalent to `J² = I` and
/// `⟨Jx, Jy⟩ = ⟨y, x⟩`.
#[derive(Clone, Debug)]
pub struct Conjugation(CMatrix);

impl Conjugation {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotConjugation("matrix is not square".into()));
        }
        let unitary = unitarity_residual(&m);
        if unitary > tol::ORTHO {
            return Err(Error::NotConjugation(format!(
                "matrix is not unitary (residual {unitary:.3e})"
            )));
        }
        let symmetric = symmetry_residual(&m);
        if symmetric > tol::ORTHO {
            return Err(Error::NotConjugation(format!(
                "matrix is not symmetric (residual {symmetric:.3e})"
            )));
        }
        Ok(Self(m))
    }

    /// Entrywise complex conjugation in the standard basis.
    pub fn standard(n: usize) -> Self {
        Self(identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        &self.0 * x.conjugate()
    }

    /// Applies the map column-wise.
    pub fn apply_columns(&self, x: &CMatrix) -> CMatrix {
        &self.0 * x.conjugate()
    }

    /// The linear operator `self ∘ other`: `x ↦ A conj(B x̄) = A B̄ x`.
    pub fn compose(&self, other: &Conjugation) -> CMatrix {
        &self.0 * other.0.conjugate()
    }

    /// `‖J∘J − I‖_F`.
    pub fn involution_residual(&self) -> f64 {
        (self.compose(self) - identity(self.dim())).norm()
    }
}

pub fn symmetry_residual(m: &CMatrix) -> f64 {
    (m - m.transpose()).norm()
}

impl Serialize for Conjugation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::matrix::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Conjugation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        Conjugation::new(json::matrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c64, from_rows, IMAG, ONE, ZERO};
    use approx::assert_abs_diff_eq;

    #[test]
    fn swap_is_a_conjugation() {
        let j = Conjugation::new(from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])).unwrap();
        let x = CVector::from_vec(vec![c64(1.0, 2.0), c64(3.0, -1.0)]);
        let y = CVector::from_vec(vec![c64(0.5, 0.0), c64(0.0, 1.0)]);
        assert_abs_diff_eq!(j.involution_residual(), 0.0);
        // ⟨Jx, Jy⟩ = ⟨y, x⟩
        let lhs = j.apply(&y).dotc(&j.apply(&x));
        let rhs = x.dotc(&y);
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = from_rows(&[&[ZERO, ONE], &[-ONE, ZERO]]);
        assert!(Conjugation::new(m).is_err());
    }

    #[test]
    fn composition_is_linear() {
        let a = Conjugation::new(from_rows(&[&[IMAG, ZERO], &[ZERO, ONE]])).unwrap();
        let b = Conjugation::standard(2);
        let x = CVector::from_vec(vec![c64(1.0, 2.0), c64(3.0, -1.0)]);
        let composed = a.compose(&b) * &x;
        assert_abs_diff_eq!((composed - a.apply(&b.apply(&x))).norm(), 0.0, epsilon = 1e-14);
    }
}
