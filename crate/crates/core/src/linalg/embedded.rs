use serde::{Deserialize, Deserializer, Serialize};

use super::json;
use super::matrix::{identity, CMatrix};
use crate::error::{Error, Result};
use crate::tol;

/// A small space `H` sitting isometrically inside a big space `H̃`.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedSpace {
    small_dim: usize,
    big_dim: usize,
    #[serde(with = "json::matrix")]
    embedding: CMatrix,
}

impl EmbeddedSpace {
    pub fn new(embedding: CMatrix) -> Result<Self> {
        let (big, small) = embedding.shape();
        if small > big {
            return Err(Error::Shape(format!(
                "embedding {big}x{small} cannot be isometric"
            )));
        }
        let residual = (embedding.adjoint() * &embedding - identity(small)).norm();
        if residual > tol::ORTHO || !super::matrix::all_finite(&embedding) {
            return Err(Error::NotIsometric(residual));
        }
        Ok(Self {
            small_dim: small,
            big_dim: big,
            embedding,
        })
    }

    /// `H = H̃`.
    pub fn identity(n: usize) -> Self {
        Self {
            small_dim: n,
            big_dim: n,
            embedding: identity(n),
        }
    }

    pub fn small_dim(&self) -> usize {
        self.small_dim
    }

    pub fn big_dim(&self) -> usize {
        self.big_dim
    }

    pub fn embedding(&self) -> &CMatrix {
        &self.embedding
    }

    /// `P_H A |_H = ιᴴ A ι`.
    pub fn compress(&self, a: &CMatrix) -> CMatrix {
        self.embedding.adjoint() * a * &self.embedding
    }
}

impl<'de> Deserialize<'de> for EmbeddedSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            small_dim: usize,
            big_dim: usize,
            #[serde(with = "json::matrix")]
            embedding: CMatrix,
        }
        let raw = Raw::deserialize(d)?;
        let m = json::fit_shape(raw.embedding, raw.big_dim, raw.small_dim).map_err(D::Error::custom)?;
        EmbeddedSpace::new(m).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::c64;

    #[test]
    fn rejects_non_isometric_embedding() {
        let m = CMatrix::from_element(2, 1, c64(1.0, 0.0));
        assert!(matches!(EmbeddedSpace::new(m), Err(Error::NotIsometric(_))));
    }

    #[test]
    fn compression_of_identity_is_identity() {
        let r = 1.0 / 2f64.sqrt();
        let e = EmbeddedSpace::new(CMatrix::from_element(2, 1, c64(r, 0.0))).unwrap();
        let c = e.compress(&identity(2));
        assert!((c[(0, 0)].re - 1.0).abs() < 1e-14);
    }
}
