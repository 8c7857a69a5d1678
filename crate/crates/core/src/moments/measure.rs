use std::f64::consts::TAU;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::json;
use crate::linalg::matrix::{hermitian_part, identity, min_eigenvalue, CMatrix, CVector, ExtPoint, C64};
use crate::linalg::unitary::herglotz_kernel;
use crate::pair::PairSampler;
use crate::tol;

/// Angle of grid index `j ∈ 1..=n`: `2πj/n`, so index `n` sits at `2π`.
pub fn grid_angle(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

/// A complex measure with atoms at `(2πj/n₁, 2πk/n₂)`, `1 ≤ j ≤ n₁`, `1 ≤ k ≤ n₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridScalarMeasure {
    n1: usize,
    n2: usize,
    weights: Vec<C64>,
}

impl GridScalarMeasure {
    pub fn new(n1: usize, n2: usize, weights: Vec<C64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 || weights.len() != n1 * n2 {
            return Err(Error::Shape(format!(
                "{} weights for a {n1}x{n2} grid",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n1, n2, weights })
    }

    pub fn zeros(n1: usize, n2: usize) -> Self {
        Self {
            n1,
            n2,
            weights: vec![C64::new(0.0, 0.0); n1 * n2],
        }
    }

    /// Point mass `w` at cell `(j, k)` (1-based).
    pub fn atom(n1: usize, n2: usize, j: usize, k: usize, w: C64) -> Self {
        let mut m = Self::zeros(n1, n2);
        m.set(j, k, w);
        m
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    fn index(&self, j: usize, k: usize) -> usize {
        assert!((1..=self.n1).contains(&j) && (1..=self.n2).contains(&k), "cell ({j}, {k}) off grid");
        (j - 1) * self.n2 + (k - 1)
    }

    pub fn weight(&self, j: usize, k: usize) -> C64 {
        self.weights[self.index(j, k)]
    }

    pub fn set(&mut self, j: usize, k: usize, w: C64) {
        let i = self.index(j, k);
        self.weights[i] = w;
    }

    /// Iterates `(j, k, weight)` with 1-based indices.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let n2 = self.n2;
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (i / n2 + 1, i % n2 + 1, w))
    }

    pub fn total_mass(&self) -> C64 {
        self.weights.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|w| w.re >= -tol::PSD && w.im.abs() <= tol::PSD)
    }

    pub fn max_abs(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.n1 != other.n1 || self.n2 != other.n2 {
            Err(Error::GridMismatch(self.n1, self.n2, other.n1, other.n2))
        } else {
            Ok(())
        }
    }

    /// `Σ c_i m_i` over measures on a common grid.
    pub fn combine(terms: &[(C64, &GridScalarMeasure)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Shape("empty combination".into()))?
            .1;
        let mut out = Self::zeros(first.n1, first.n2);
        for (c, m) in terms {
            first.same_grid(m)?;
            for (o, w) in out.weights.iter_mut().zip(&m.weights) {
                *o += c * w;
            }
        }
        Ok(out)
    }

    /// `f(z₁,z₂) = Σ K(z₁,θ_j) K(z₂,θ_k) w_{jk}` with the kernel `(1 + z e^{iθ})/(1 − z e^{iθ})`.
    pub fn kernel_sum(&self, z1: ExtPoint, z2: ExtPoint) -> C64 {
        let k1: Vec<C64> = (1..=self.n1).map(|j| herglotz_kernel(z1, grid_angle(j, self.n1))).collect();
        let k2: Vec<C64> = (1..=self.n2).map(|k| herglotz_kernel(z2, grid_angle(k, self.n2))).collect();
        self.cells().map(|(j, k, w)| k1[j - 1] * k2[k - 1] * w).sum()
    }
}

impl PairSampler for GridScalarMeasure {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        crate::linalg::matrix::check_off_circle(z1)?;
        crate::linalg::matrix::check_off_circle(z2)?;
        Ok(CMatrix::from_element(1, 1, self.kernel_sum(z1.into(), z2.into())))
    }

    fn eval_exact(&self, z1: ExtPoint, z2: ExtPoint) -> Option<Result<CMatrix>> {
        Some(Ok(CMatrix::from_element(1, 1, self.kernel_sum(z1, z2))))
    }
}

/// A measure on the same grid whose atoms are `dim × dim` matrices.
#[derive(Clone, Debug)]
pub struct GridOperatorMeasure {
    n1: usize,
    n2: usize,
    dim: usize,
    atoms: Vec<CMatrix>,
}

impl GridOperatorMeasure {
    /// Builds the measure and checks `0 ≤ E_{jk}` and `Σ E_{jk} = I`.
    pub fn new(n1: usize, n2: usize, dim: usize, atoms: Vec<CMatrix>) -> Result<Self> {
        let m = Self::unchecked(n1, n2, dim, atoms)?;
        for (j, k, a) in m.cells() {
            let herm = (a - a.adjoint()).norm();
            let low = min_eigenvalue(a);
            if low < -tol::PSD || herm > tol::PSD {
                return Err(Error::NegativeAtom {
                    j,
                    k,
                    eigenvalue: if herm > tol::PSD { -herm } else { low },
                    hint: 2 * n1.max(n2),
                });
            }
        }
        let r = m.normalization_residual();
        if r > tol::RECONSTRUCT {
            return Err(Error::NotNormalized(r));
        }
        Ok(m)
    }

    /// Builds the measure with shape checks only.
    pub fn unchecked(n1: usize, n2: usize, dim: usize, atoms: Vec<CMatrix>) -> Result<Self> {
        if n1 == 0 || n2 == 0 || atoms.len() != n1 * n2 {
            return Err(Error::Shape(format!("{} atoms for a {n1}x{n2} grid", atoms.len())));
        }
        if atoms.iter().any(|a| a.shape() != (dim, dim)) {
            return Err(Error::Shape(format!("atoms must be {dim}x{dim}")));
        }
        if atoms.iter().any(|a| !crate::linalg::matrix::all_finite(a)) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n1, n2, dim, atoms })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom(&self, j: usize, k: usize) -> &CMatrix {
        assert!((1..=self.n1).contains(&j) && (1..=self.n2).contains(&k), "cell ({j}, {k}) off grid");
        &self.atoms[(j - 1) * self.n2 + (k - 1)]
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &CMatrix)> + '_ {
        let n2 = self.n2;
        self.atoms.iter().enumerate().map(move |(i, a)| (i / n2 + 1, i % n2 + 1, a))
    }

    pub fn total(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for a in &self.atoms {
            acc += a;
        }
        acc
    }

    /// `‖Σ E_{jk} − I‖_F`.
    pub fn normalization_residual(&self) -> f64 {
        (self.total() - identity(self.dim)).norm()
    }

    /// Smallest eigenvalue over all atoms.
    pub fn min_atom_eigenvalue(&self) -> f64 {
        self.atoms.iter().map(min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    /// Largest eigenvalue over all atoms.
    pub fn max_atom_eigenvalue(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| -min_eigenvalue(&(-a)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The scalar measure `μ(δ; h, g) = (E(δ) h, g)`.
    pub fn scalar_measure(&self, h: &CVector, g: &CVector) -> GridScalarMeasure {
        GridScalarMeasure {
            n1: self.n1,
            n2: self.n2,
            weights: self.atoms.iter().map(|a| g.dotc(&(a * h))).collect(),
        }
    }

    /// Replaces each atom by its Hermitian part.
    pub fn symmetrized(&self) -> Self {
        Self {
            atoms: self.atoms.iter().map(hermitian_part).collect(),
            ..self.clone()
        }
    }

    /// `Σ K(z₁,θ_j) K(z₂,θ_k) E_{jk}`.
    pub fn kernel_sum(&self, z1: ExtPoint, z2: ExtPoint) -> CMatrix {
        let k1: Vec<C64> = (1..=self.n1).map(|j| herglotz_kernel(z1, grid_angle(j, self.n1))).collect();
        let k2: Vec<C64> = (1..=self.n2).map(|k| herglotz_kernel(z2, grid_angle(k, self.n2))).collect();
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (j, k, a) in self.cells() {
            acc += a * (k1[j - 1] * k2[k - 1]);
        }
        acc
    }
}

/// The pair resolvent whose spectral measure is a given operator grid measure.
#[derive(Clone, Debug)]
pub struct MeasureResolvent(pub GridOperatorMeasure);

impl PairSampler for MeasureResolvent {
    fn dim(&self) -> usize {
        self.0.dim
    }

    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        crate::linalg::matrix::check_off_circle(z1)?;
        crate::linalg::matrix::check_off_circle(z2)?;
        Ok(self.0.kernel_sum(z1.into(), z2.into()))
    }

    fn eval_exact(&self, z1: ExtPoint, z2: ExtPoint) -> Option<Result<CMatrix>> {
        Some(Ok(self.0.kernel_sum(z1, z2)))
    }
}

#[derive(Serialize, Deserialize)]
struct RawScalar {
    n1: usize,
    n2: usize,
    dim: usize,
    atoms: Vec<(usize, usize, [f64; 2])>,
}

impl Serialize for GridScalarMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawScalar {
            n1: self.n1,
            n2: self.n2,
            dim: 1,
            atoms: self
                .cells()
                .filter(|(_, _, w)| w.norm() > 0.0)
                .map(|(j, k, w)| (j, k, json::complex_to_pair(w)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridScalarMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawScalar::deserialize(d)?;
        if raw.dim != 1 || raw.n1 == 0 || raw.n2 == 0 {
            return Err(D::Error::custom("scalar measure needs dim 1 and a non-empty grid"));
        }
        let mut m = GridScalarMeasure::zeros(raw.n1, raw.n2);
        for (j, k, [re, im]) in raw.atoms {
            if !(1..=raw.n1).contains(&j) || !(1..=raw.n2).contains(&k) {
                return Err(D::Error::custom(format!("cell ({j}, {k}) off grid")));
            }
            m.set(j, k, C64::new(re, im));
        }
        GridScalarMeasure::new(m.n1, m.n2, m.weights).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct RawOperator {
    n1: usize,
    n2: usize,
    dim: usize,
    atoms: Vec<(usize, usize, Vec<Vec<[f64; 2]>>)>,
}

impl Serialize for GridOperatorMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawOperator {
            n1: self.n1,
            n2: self.n2,
            dim: self.dim,
            atoms: self
                .cells()
                .filter(|(_, _, a)| a.norm() > 0.0)
                .map(|(j, k, a)| (j, k, json::matrix_to_rows(a)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridOperatorMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawOperator::deserialize(d)?;
        if raw.n1 == 0 || raw.n2 == 0 {
            return Err(D::Error::custom("empty grid"));
        }
        let mut atoms = vec![CMatrix::zeros(raw.dim, raw.dim); raw.n1 * raw.n2];
        for (j, k, rows) in raw.atoms {
            if !(1..=raw.n1).contains(&j) || !(1..=raw.n2).contains(&k) {
                return Err(D::Error::custom(format!("cell ({j}, {k}) off grid")));
            }
            let m = json::rows_to_matrix(&rows).map_err(D::Error::custom)?;
            atoms[(j - 1) * raw.n2 + (k - 1)] = json::fit_shape(m, raw.dim, raw.dim).map_err(D::Error::custom)?;
        }
        GridOperatorMeasure::new(raw.n1, raw.n2, raw.dim, atoms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;

    #[test]
    fn atom_kernel_at_pi() {
        let m = GridScalarMeasure::atom(2, 2, 1, 1, ONE);
        let z = C64::new(0.3, 0.0);
        let expected = ((ONE - z) / (ONE + z)).powi(2);
        assert!((m.kernel_sum(z.into(), z.into()) - expected).norm() < 1e-14);
    }

    #[test]
    fn operator_measure_checks() {
        let half = identity(1).scale(0.5);
        let ok = GridOperatorMeasure::new(1, 2, 1, vec![half.clone(), half.clone()]);
        assert!(ok.is_ok());
        assert!(matches!(
            GridOperatorMeasure::new(1, 2, 1, vec![half.clone(), half.scale(0.5)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            GridOperatorMeasure::new(1, 2, 1, vec![half.scale(3.0), -half]),
            Err(Error::NegativeAtom { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let m = GridScalarMeasure::atom(4, 2, 3, 2, C64::new(0.25, 0.0));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"n1":4,"n2":2,"dim":1,"atoms":[[3,2,[0.25,0.0]]]}"#);
        let back: GridScalarMeasure = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
