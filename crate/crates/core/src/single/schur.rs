use std::f64::consts::TAU;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::json;
use crate::linalg::matrix::{spectral_norm, CMatrix, C64};
use crate::linalg::Subspace;
use crate::tol;

/// A matrix polynomial `Φ(z) = Σ C_k z^k` from the coordinates of
/// `source_basis` to those of `target_basis`, contractive on the disk.
#[derive(Clone, Debug)]
pub struct SchurParameter {
    coefficients: Vec<CMatrix>,
    source: Subspace,
    target: Subspace,
}

/// Radii and angle count of the disk grid on which contractivity is certified.
pub const VALIDATION_RADII: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const VALIDATION_ANGLES: usize = 64;

impl SchurParameter {
    /// Builds and certifies the parameter.
    pub fn new(coefficients: Vec<CMatrix>, source: Subspace, target: Subspace) -> Result<Self> {
        let p = Self::unchecked(coefficients, source, target)?;
        p.validate()?;
        Ok(p)
    }

    /// Builds without the contractivity certificate (shape checks only).
    pub fn unchecked(coefficients: Vec<CMatrix>, source: Subspace, target: Subspace) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Shape("a Schur parameter needs at least one coefficient".into()));
        }
        let shape = (target.rank(), source.rank());
        if let Some(c) = coefficients.iter().find(|c| c.shape() != shape) {
            return Err(Error::Shape(format!(
                "coefficient is {}x{}, expected {}x{}",
                c.nrows(),
                c.ncols(),
                shape.0,
                shape.1
            )));
        }
        if source.ambient_dim() != target.ambient_dim() {
            return Err(Error::Shape("source and target live in different spaces".into()));
        }
        if coefficients.iter().any(|c| !crate::linalg::matrix::all_finite(c)) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            coefficients,
            source,
            target,
        })
    }

    pub fn constant(c: CMatrix, source: Subspace, target: Subspace) -> Result<Self> {
        Self::new(vec![c], source, target)
    }

    pub fn zero(source: Subspace, target: Subspace) -> Self {
        let c = CMatrix::zeros(target.rank(), source.rank());
        Self {
            coefficients: vec![c],
            source,
            target,
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[CMatrix] {
        &self.coefficients
    }

    pub fn source(&self) -> &Subspace {
        &self.source
    }

    pub fn target(&self) -> &Subspace {
        &self.target
    }

    pub fn is_constant(&self) -> bool {
        self.coefficients.iter().skip(1).all(|c| c.norm() == 0.0)
    }

    /// `Φ(z)` in defect coordinates (Horner).
    pub fn eval(&self, z: C64) -> CMatrix {
        let mut acc = self.coefficients.last().cloned().unwrap_or_default();
        for c in self.coefficients.iter().rev().skip(1) {
            acc = acc * z + c;
        }
        acc
    }

    /// `Φ(z) P_{source}` as an operator on the ambient space.
    pub fn eval_ambient(&self, z: C64) -> CMatrix {
        self.target.basis() * self.eval(z) * self.source.basis().adjoint()
    }

    /// Largest operator norm of `Φ` over the validation grid.
    pub fn max_norm(&self) -> f64 {
        let mut worst = spectral_norm(&self.eval(C64::new(0.0, 0.0)));
        for &r in &VALIDATION_RADII {
            for k in 0..VALIDATION_ANGLES {
                let z = C64::from_polar(r, TAU * k as f64 / VALIDATION_ANGLES as f64);
                worst = worst.max(spectral_norm(&self.eval(z)));
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        let worst = self.max_norm();
        if worst > 1.0 + tol::SCHUR {
            Err(Error::NotContractive(worst))
        } else {
            Ok(())
        }
    }

    /// Applies `f` to every coefficient, keeping the bases.
    pub fn map_coefficients(
        &self,
        f: impl Fn(&CMatrix) -> CMatrix,
        source: Subspace,
        target: Subspace,
    ) -> Result<Self> {
        Self::unchecked(self.coefficients.iter().map(f).collect(), source, target)
    }

    /// `max_k ‖C_k − C'_k‖_F` with missing coefficients read as zero.
    pub fn coefficient_distance(&self, other: &SchurParameter) -> f64 {
        let n = self.coefficients.len().max(other.coefficients.len());
        (0..n)
            .map(|k| match (self.coefficients.get(k), other.coefficients.get(k)) {
                (Some(a), Some(b)) if a.shape() == b.shape() => (a - b).norm(),
                (Some(a), None) => a.norm(),
                (None, Some(b)) => b.norm(),
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

/// Scalar helper: the 1×1 constant parameter `c` between one-dimensional subspaces.
pub fn scalar_parameter(c: C64, source: Subspace, target: Subspace) -> Result<SchurParameter> {
    SchurParameter::constant(CMatrix::from_element(1, 1, c), source, target)
}

#[derive(Serialize, Deserialize)]
struct Raw {
    degree: usize,
    #[serde(with = "json::matrices")]
    coefficients: Vec<CMatrix>,
    source_basis: Subspace,
    target_basis: Subspace,
}

impl Serialize for SchurParameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Raw {
            degree: self.degree(),
            coefficients: self.coefficients.clone(),
            source_basis: self.source.clone(),
            target_basis: self.target.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SchurParameter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Raw::deserialize(d)?;
        if raw.coefficients.len() != raw.degree + 1 {
            return Err(D::Error::custom("degree does not match the coefficient count"));
        }
        let (r, c) = (raw.target_basis.rank(), raw.source_basis.rank());
        let coefficients = raw
            .coefficients
            .into_iter()
            .map(|m| json::fit_shape(m, r, c))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        SchurParameter::new(coefficients, raw.source_basis, raw.target_basis).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::c64;

    #[test]
    fn polynomial_evaluation() {
        let s = Subspace::full(1);
        let p = SchurParameter::new(
            vec![CMatrix::from_element(1, 1, c64(0.5, 0.0)), CMatrix::from_element(1, 1, c64(0.5, 0.0))],
            s.clone(),
            s,
        )
        .unwrap();
        assert!((p.eval(c64(0.5, 0.0))[(0, 0)] - c64(0.75, 0.0)).norm() < 1e-15);
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn expanding_parameter_rejected() {
        let s = Subspace::full(1);
        let r = SchurParameter::new(
            vec![CMatrix::from_element(1, 1, c64(0.6, 0.0)), CMatrix::from_element(1, 1, c64(0.6, 0.0))],
            s.clone(),
            s,
        );
        assert!(matches!(r, Err(Error::NotContractive(_))));
    }

    #[test]
    fn json_roundtrip() {
        let s = Subspace::full(2);
        let p = SchurParameter::zero(s.clone(), Subspace::zero(2));
        let txt = serde_json::to_string(&p).unwrap();
        let back: SchurParameter = serde_json::from_str(&txt).unwrap();
        assert_eq!(back.coefficients()[0].shape(), (0, 2));
    }
}
