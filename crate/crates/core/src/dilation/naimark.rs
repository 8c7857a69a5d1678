use std::ops::Range;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::json;
use crate::linalg::matrix::{hermitian_eigen, identity, psd_sqrt, CMatrix, C64};
use crate::linalg::subspace::orthonormalize;
use crate::linalg::EmbeddedSpace;
use crate::moments::GridOperatorMeasure;
use crate::tol;

/// A projection-valued measure on a big space whose compression to the small
/// space is a given operator grid measure.
///
/// The big space is a direct sum of one block per supported cell; the
/// projection of a cell selects its block.
#[derive(Clone, Debug)]
pub struct NaimarkDilation {
    n1: usize,
    n2: usize,
    embedding: EmbeddedSpace,
    cells: Vec<(usize, usize)>,
    blocks: Vec<Range<usize>>,
}

impl NaimarkDilation {
    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn small_dim(&self) -> usize {
        self.embedding.small_dim()
    }

    pub fn big_dim(&self) -> usize {
        self.embedding.big_dim()
    }

    pub fn embedding(&self) -> &EmbeddedSpace {
        &self.embedding
    }

    /// Supported cells with their coordinate blocks in the big space.
    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), Range<usize>)> + '_ {
        self.cells.iter().copied().zip(self.blocks.iter().cloned())
    }

    fn selector(&self, keep: impl Fn(usize, usize) -> bool) -> CMatrix {
        let mut f = CMatrix::zeros(self.big_dim(), self.big_dim());
        for ((j, k), range) in self.blocks() {
            if keep(j, k) {
                for i in range {
                    f[(i, i)] = C64::new(1.0, 0.0);
                }
            }
        }
        f
    }

    /// `F_{jk}`; zero for cells without an atom.
    pub fn projection(&self, j: usize, k: usize) -> CMatrix {
        self.selector(|a, b| (a, b) == (j, k))
    }

    /// `F(δ)` for the union of cells `(j, k)` with `j ∈ rows`, `k ∈ cols`
    /// (1-based, inclusive ranges as half-open `Range`s).
    pub fn rectangle(&self, rows: Range<usize>, cols: Range<usize>) -> CMatrix {
        self.selector(|j, k| rows.contains(&j) && cols.contains(&k))
    }

    /// `F(δ)` for an arbitrary set of cells.
    pub fn union(&self, cells: &[(usize, usize)]) -> CMatrix {
        self.selector(|j, k| cells.contains(&(j, k)))
    }

    /// All `n₁ n₂` projections in row-major cell order.
    pub fn projections(&self) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(self.n1 * self.n2);
        for j in 1..=self.n1 {
            for k in 1..=self.n2 {
                out.push(self.projection(j, k));
            }
        }
        out
    }

    /// `max ‖ιᴴ F_{jk} ι − E_{jk}‖_F` over all cells.
    pub fn compression_residual(&self, e: &GridOperatorMeasure) -> Result<f64> {
        if (e.n1(), e.n2(), e.dim()) != (self.n1, self.n2, self.small_dim()) {
            return Err(Error::GridMismatch(self.n1, self.n2, e.n1(), e.n2()));
        }
        let iota = self.embedding.embedding();
        let mut worst = 0.0f64;
        for (j, k, atom) in e.cells() {
            let compressed = match self.cells.iter().position(|&c| c == (j, k)) {
                Some(i) => {
                    let rows = iota.rows(self.blocks[i].start, self.blocks[i].len());
                    rows.adjoint() * rows
                }
                None => CMatrix::zeros(self.small_dim(), self.small_dim()),
            };
            worst = worst.max((compressed - atom).norm());
        }
        Ok(worst)
    }

    /// Largest of the idempotence, self-adjointness, mutual orthogonality and
    /// completeness residuals of the cell projections.
    pub fn invariant_residual(&self) -> f64 {
        let ps: Vec<CMatrix> = self.blocks().map(|((j, k), _)| self.projection(j, k)).collect();
        let mut worst = 0.0f64;
        let mut total = CMatrix::zeros(self.big_dim(), self.big_dim());
        for (a, p) in ps.iter().enumerate() {
            worst = worst.max((p * p - p).norm()).max((p - p.adjoint()).norm());
            for q in &ps[a + 1..] {
                worst = worst.max((p * q).norm());
            }
            total += p;
        }
        worst.max((total - identity(self.big_dim())).norm())
    }
}

/// Square-root stacking: the embedding is the column of blocks `E_{jk}^{1/2}`
/// over the cells with `‖E_{jk}‖ > ε_atom`, and `F_{jk}` selects block `(j, k)`.
///
/// Rounding makes `Σ E_{jk}^{1/2} E_{jk}^{1/2}` differ from `I` at the level
/// of the input normalization error; the embedding is right-multiplied by the
/// inverse square root of that sum so that it is isometric to working precision.
pub fn naimark_dilate(e: &GridOperatorMeasure) -> Result<NaimarkDilation> {
    dilate(e, false)
}

/// As [`naimark_dilate`], restricted to `span{F_{jk} ι h}`: each block keeps
/// only the range of `E_{jk}^{1/2}`.
pub fn naimark_dilate_minimal(e: &GridOperatorMeasure) -> Result<NaimarkDilation> {
    dilate(e, true)
}

fn dilate(e: &GridOperatorMeasure, minimal: bool) -> Result<NaimarkDilation> {
    let r = e.normalization_residual();
    if r > tol::RECONSTRUCT {
        return Err(Error::NotNormalized(r));
    }
    let n = e.dim();
    let mut cells = Vec::new();
    let mut pieces: Vec<CMatrix> = Vec::new();
    for (j, k, atom) in e.cells() {
        if atom.norm() <= tol::ATOM {
            continue;
        }
        let root = psd_sqrt(atom);
        let piece = if minimal {
            let range = orthonormalize(&root);
            range.basis().adjoint() * &root
        } else {
            root
        };
        if piece.nrows() == 0 {
            continue;
        }
        cells.push((j, k));
        pieces.push(piece);
    }
    let big: usize = pieces.iter().map(|p| p.nrows()).sum();
    let mut stacked = CMatrix::zeros(big, n);
    let mut blocks = Vec::with_capacity(pieces.len());
    let mut at = 0;
    for p in &pieces {
        stacked.rows_mut(at, p.nrows()).copy_from(p);
        blocks.push(at..at + p.nrows());
        at += p.nrows();
    }
    let gram = stacked.adjoint() * &stacked;
    let (values, vectors) = hermitian_eigen(&gram);
    if values.first().is_some_and(|&v| v <= 0.0) {
        return Err(Error::NotNormalized(r));
    }
    let inv_root = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        values.iter().map(|&v| C64::new(1.0 / v.sqrt(), 0.0)),
    ));
    let embedding = EmbeddedSpace::new(stacked * (&vectors * inv_root * vectors.adjoint()))?;
    Ok(NaimarkDilation {
        n1: e.n1(),
        n2: e.n2(),
        embedding,
        cells,
        blocks,
    })
}

impl Serialize for NaimarkDilation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let projections: Vec<(usize, usize, Vec<Vec<[f64; 2]>>)> = self
            .blocks()
            .map(|((j, k), _)| (j, k, json::matrix_to_rows(&self.projection(j, k))))
            .collect();
        let mut st = s.serialize_struct("NaimarkDilation", 6)?;
        st.serialize_field("n1", &self.n1)?;
        st.serialize_field("n2", &self.n2)?;
        st.serialize_field("small_dim", &self.small_dim())?;
        st.serialize_field("big_dim", &self.big_dim())?;
        st.serialize_field("embedding", &json::matrix_to_rows(self.embedding.embedding()))?;
        st.serialize_field("projections", &projections)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c64, ONE};
    use crate::random::random_operator_measure;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar(n1: usize, n2: usize, w: &[f64]) -> GridOperatorMeasure {
        let atoms = w.iter().map(|&x| CMatrix::from_element(1, 1, c64(x, 0.0))).collect();
        GridOperatorMeasure::new(n1, n2, 1, atoms).unwrap()
    }

    #[test]
    fn single_atom_is_trivial() {
        let d = naimark_dilate(&scalar(1, 1, &[1.0])).unwrap();
        assert_eq!(d.big_dim(), 1);
        assert!((d.embedding().embedding()[(0, 0)] - ONE).norm() < 1e-15);
        assert!((d.projection(1, 1)[(0, 0)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn two_halves() {
        let e = scalar(2, 1, &[0.5, 0.5]);
        let d = naimark_dilate(&e).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let iota = d.embedding().embedding();
        assert!((iota[(0, 0)].re - r).abs() < 1e-15 && (iota[(1, 0)].re - r).abs() < 1e-15);
        assert_eq!(d.projection(1, 1)[(0, 0)], ONE);
        assert_eq!(d.projection(1, 1)[(1, 1)], c64(0.0, 0.0));
        assert_eq!(d.projection(2, 1)[(1, 1)], ONE);
        assert!(d.compression_residual(&e).unwrap() < 1e-15);
    }

    #[test]
    fn projective_input_is_reproduced() {
        let mut p = CMatrix::zeros(2, 2);
        p[(0, 0)] = ONE;
        let q = identity(2) - &p;
        let e = GridOperatorMeasure::new(2, 2, 2, vec![p, CMatrix::zeros(2, 2), CMatrix::zeros(2, 2), q]).unwrap();
        let d = naimark_dilate(&e).unwrap();
        assert_eq!(d.big_dim(), 4);
        assert!(d.compression_residual(&e).unwrap() < 1e-14);
        let m = naimark_dilate_minimal(&e).unwrap();
        assert_eq!(m.big_dim(), 2);
        assert!(m.compression_residual(&e).unwrap() < 1e-14);
    }

    #[test]
    fn random_measures_compress_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let e = random_operator_measure(&mut rng, 3, 4, 4, 6);
            for d in [naimark_dilate(&e).unwrap(), naimark_dilate_minimal(&e).unwrap()] {
                assert!(d.compression_residual(&e).unwrap() < 1e-10);
                assert!(d.invariant_residual() < 1e-14);
            }
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let e = GridOperatorMeasure::unchecked(1, 2, 1, vec![CMatrix::from_element(1, 1, c64(0.5, 0.0)); 2])
            .unwrap();
        assert!(naimark_dilate(&e).is_ok());
        let bad = GridOperatorMeasure::unchecked(1, 1, 1, vec![CMatrix::from_element(1, 1, c64(0.5, 0.0))]).unwrap();
        assert!(matches!(naimark_dilate(&bad), Err(Error::NotNormalized(_))));
    }
}
