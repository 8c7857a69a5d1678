use nalgebra::linalg::SVD;
use serde::{Deserialize, Deserializer, Serialize};

use super::json;
use super::matrix::{canonicalize_phases, hermitian_eigen, identity, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::tol;

/// A subspace of `ℂⁿ` held by an orthonormal basis stored column-wise.
#[derive(Clone, Debug, Serialize)]
pub struct Subspace {
    ambient_dim: usize,
    #[serde(with = "json::matrix")]
    basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: CMatrix) -> Result<Self> {
        let r = basis.ncols();
        let residual = (basis.adjoint() * &basis - identity(r)).norm();
        if residual > tol::ORTHO {
            return Err(Error::Shape(format!(
                "basis is not orthonormal (residual {residual:.3e})"
            )));
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Distance of `v` from the subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Largest distance of the columns of `vectors` from the subspace.
    pub fn containment_residual(&self, vectors: &CMatrix) -> f64 {
        let off = vectors - &self.basis * (self.basis.adjoint() * vectors);
        super::matrix::max_column_norm(&off)
    }

    pub fn complement(&self) -> Subspace {
        complement(self)
    }

    /// `A ∩ B = (A⊥ + B⊥)⊥`.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let a = self.complement();
        let b = other.complement();
        let mut joined = CMatrix::zeros(self.ambient_dim, a.rank() + b.rank());
        joined.columns_mut(0, a.rank()).copy_from(&a.basis);
        joined.columns_mut(a.rank(), b.rank()).copy_from(&b.basis);
        orthonormalize(&joined).complement()
    }

    /// `‖P_A − P_B‖_F`; zero exactly when the subspaces coincide.
    pub fn projector_distance(&self, other: &Subspace) -> f64 {
        if self.ambient_dim != other.ambient_dim {
            return f64::INFINITY;
        }
        (self.projector() - other.projector()).norm()
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            ambient_dim: usize,
            #[serde(with = "json::matrix")]
            basis: CMatrix,
        }
        let raw = Raw::deserialize(d)?;
        let cols = if raw.basis.nrows() == raw.ambient_dim {
            raw.basis.ncols()
        } else {
            0
        };
        let basis = json::fit_shape(raw.basis, raw.ambient_dim, cols).map_err(D::Error::custom)?;
        Subspace::from_orthonormal(basis).map_err(D::Error::custom)
    }
}

/// Orthonormal basis of the column span, with numerical rank decided by
/// singular values above `RANK · max(σ_max, 1)`.
pub fn orthonormalize(vectors: &CMatrix) -> Subspace {
    orthonormalize_with(vectors, tol::RANK)
}

pub fn orthonormalize_with(vectors: &CMatrix, eps_rank: f64) -> Subspace {
    let n = vectors.nrows();
    if vectors.ncols() == 0 || n == 0 {
        return Subspace::zero(n);
    }
    let svd = SVD::new(vectors.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma = &svd.singular_values;
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    let cut = eps_rank * top.max(1.0);
    let keep: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > cut).collect();
    let mut basis = CMatrix::from_fn(n, keep.len(), |r, c| u[(r, keep[c])]);
    canonicalize_phases(&mut basis);
    Subspace {
        ambient_dim: n,
        basis,
    }
}

/// Orthogonal complement, read off the unit eigenspace of `I − P`.
pub fn complement(sub: &Subspace) -> Subspace {
    let n = sub.ambient_dim;
    if sub.rank() == 0 {
        return Subspace::full(n);
    }
    if sub.rank() == n {
        return Subspace::zero(n);
    }
    let perp = identity(n) - sub.projector();
    let (values, vectors) = hermitian_eigen(&perp);
    let keep: Vec<usize> = (0..n).filter(|&i| values[i] > 0.5).collect();
    let mut basis = CMatrix::from_fn(n, keep.len(), |r, c| vectors[(r, keep[c])]);
    canonicalize_phases(&mut basis);
    Subspace {
        ambient_dim: n,
        basis,
    }
}
