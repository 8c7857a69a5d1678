use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::json;
use crate::linalg::matrix::{identity, CMatrix, ExtPoint};
use crate::linalg::subspace::{orthonormalize, Subspace};
use crate::linalg::UnitaryOperator;
use crate::tol;

/// An isometric operator `V` on `ℂⁿ` defined on the subspace `D(V)`.
///
/// `action` holds the images of the domain basis vectors, column by column.
#[derive(Clone, Debug)]
pub struct PartialIsometry {
    domain: Subspace,
    action: CMatrix,
}

impl PartialIsometry {
    pub fn new(domain: Subspace, action: CMatrix) -> Result<Self> {
        let (n, r) = (domain.ambient_dim(), domain.rank());
        if action.shape() != (n, r) {
            return Err(Error::Shape(format!(
                "action must be {}x{}, found {}x{}",
                n,
                r,
                action.nrows(),
                action.ncols()
            )));
        }
        let residual = (action.adjoint() * &action - identity(r)).norm();
        if residual > tol::ORTHO || !crate::linalg::matrix::all_finite(&action) {
            return Err(Error::NotIsometric(residual));
        }
        Ok(Self { domain, action })
    }

    /// The operator with `D(V) = {0}`.
    pub fn trivial(n: usize) -> Self {
        Self {
            domain: Subspace::zero(n),
            action: CMatrix::zeros(n, 0),
        }
    }

    /// `V = U` on all of `ℂⁿ`.
    pub fn from_unitary(u: &UnitaryOperator) -> Self {
        Self {
            domain: Subspace::full(u.dim()),
            action: u.matrix().clone(),
        }
    }

    /// The restriction of a linear map `T` to `domain`; `T` must be isometric there.
    pub fn restrict(t: &CMatrix, domain: Subspace) -> Result<Self> {
        let action = t * domain.basis();
        Self::new(domain, action)
    }

    pub fn dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn action(&self) -> &CMatrix {
        &self.action
    }

    /// `V P_{D(V)}` as an `n × n` matrix: `V` on `D(V)` and zero on its complement.
    pub fn operator(&self) -> CMatrix {
        &self.action * self.domain.basis().adjoint()
    }

    /// `R(V)`.
    pub fn range(&self) -> Subspace {
        Subspace::from_orthonormal(self.action.clone())
            .unwrap_or_else(|_| orthonormalize(&self.action))
    }

    /// `N₀(V) = H ⊖ D(V)`.
    pub fn defect_domain(&self) -> Subspace {
        self.domain.complement()
    }

    /// `N_∞(V) = H ⊖ R(V)`.
    pub fn defect_range(&self) -> Subspace {
        self.range().complement()
    }
}

/// `M_ζ(V) = (I − ζV) D(V)` and `N_ζ(V) = H ⊖ M_ζ(V)`, with `M_∞(V) = R(V)`.
pub fn defect_subspaces(v: &PartialIsometry, zeta: impl Into<ExtPoint>) -> (Subspace, Subspace) {
    let m = match zeta.into() {
        ExtPoint::Infinity => v.range(),
        ExtPoint::Finite(z) => orthonormalize(&(v.domain.basis() - &v.action * z)),
    };
    let n = m.complement();
    (m, n)
}

#[derive(Serialize, Deserialize)]
struct Raw {
    dim: usize,
    #[serde(with = "json::matrix")]
    domain_basis: CMatrix,
    #[serde(with = "json::matrix")]
    action: CMatrix,
}

impl Serialize for PartialIsometry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Raw {
            dim: self.dim(),
            domain_basis: self.domain.basis().clone(),
            action: self.action.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialIsometry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Raw::deserialize(d)?;
        let rank = raw.action.ncols().max(raw.domain_basis.ncols());
        let basis = json::fit_shape(raw.domain_basis, raw.dim, rank).map_err(D::Error::custom)?;
        let action = json::fit_shape(raw.action, raw.dim, rank).map_err(D::Error::custom)?;
        let domain = Subspace::from_orthonormal(basis).map_err(D::Error::custom)?;
        PartialIsometry::new(domain, action).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{basis_vector, c64};
    use approx::assert_abs_diff_eq;

    pub(crate) fn shift() -> PartialIsometry {
        let d = Subspace::from_orthonormal(CMatrix::from_column_slice(2, 1, basis_vector(2, 0).as_slice())).unwrap();
        PartialIsometry::new(d, CMatrix::from_column_slice(2, 1, basis_vector(2, 1).as_slice())).unwrap()
    }

    #[test]
    fn trivial_operator_defects() {
        let v = PartialIsometry::trivial(1);
        let (m, n) = defect_subspaces(&v, c64(0.3, 0.1));
        assert_eq!(m.rank(), 0);
        assert_eq!(n.rank(), 1);
    }

    #[test]
    fn identity_has_no_defect() {
        let v = PartialIsometry::from_unitary(&UnitaryOperator::identity(2));
        let (m, n) = defect_subspaces(&v, 0.0);
        assert_eq!(m.rank(), 2);
        assert_eq!(n.rank(), 0);
    }

    #[test]
    fn shift_defects() {
        let v = shift();
        let (_, n0) = defect_subspaces(&v, 0.0);
        let (_, ninf) = defect_subspaces(&v, ExtPoint::Infinity);
        assert_abs_diff_eq!(n0.distance(&basis_vector(2, 1)), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ninf.distance(&basis_vector(2, 0)), 0.0, epsilon = 1e-14);
        assert_eq!(n0.rank(), 1);
        assert_eq!(ninf.rank(), 1);
    }

    #[test]
    fn json_roundtrip_of_trivial_operator() {
        let v = PartialIsometry::trivial(3);
        let s = serde_json::to_string(&v).unwrap();
        let back: PartialIsometry = serde_json::from_str(&s).unwrap();
        assert_eq!(back.dim(), 3);
        assert_eq!(back.domain().rank(), 0);
    }

    #[test]
    fn non_isometric_action_rejected() {
        let d = Subspace::full(1);
        let a = CMatrix::from_element(1, 1, c64(0.5, 0.0));
        assert!(matches!(PartialIsometry::new(d, a), Err(Error::NotIsometric(_))));
    }
}
