use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::linalg::matrix::{basis_vector, quadratic_form, CMatrix, CVector, IMAG};
use crate::moments::{invert_grid_measure, polarize, ChartSamples, GridOperatorMeasure, GridScalarMeasure, TaylorConfig};
use crate::pair::{verify_theorem_3_1, PairSampler};

/// Recovers the operator measure behind a two-variable generalized resolvent.
///
/// The sampler must pass the pair condition verifier on `grid`. For each
/// vector `v` among `e_i` and `e_i ± e_j`, `e_i ± i e_j` the scalar function
/// `(R v, v)` is expanded into moments, inverted on the grid, and the scalar
/// measures are polarized into the matrix entries of the atoms.
pub fn operator_measure_from_sampler<S: PairSampler + ?Sized>(
    r: &S,
    n1: usize,
    n2: usize,
    grid: &SampleGrid,
) -> Result<GridOperatorMeasure> {
    let report = verify_theorem_3_1(r, grid);
    if !report.overall_pass {
        return Err(Error::NotAResolvent(report.failing_ids().join(", ")));
    }
    operator_measure_unverified(r, n1, n2, &TaylorConfig::default())
}

/// The recovery step alone, without the precondition check.
pub fn operator_measure_unverified<S: PairSampler + ?Sized>(
    r: &S,
    n1: usize,
    n2: usize,
    cfg: &TaylorConfig,
) -> Result<GridOperatorMeasure> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Shape("grid sizes must be positive".into()));
    }
    let n = r.dim();
    let samples = ChartSamples::collect(r, n1, n2, cfg)?;
    let measure_of = |v: &CVector| -> Result<GridScalarMeasure> {
        let table = samples.moments(|m| quadratic_form(m, v), cfg)?;
        invert_grid_measure(&table, n1, n2)
    };

    let mut atoms = vec![CMatrix::zeros(n, n); n1 * n2];
    let diagonal: Vec<GridScalarMeasure> = (0..n)
        .into_par_iter()
        .map(|i| measure_of(&basis_vector(n, i)))
        .collect::<Result<_>>()?;
    for (i, m) in diagonal.iter().enumerate() {
        for (j, k, w) in m.cells() {
            atoms[(j - 1) * n2 + (k - 1)][(i, i)] = w;
        }
    }

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let off: Vec<(usize, usize, GridScalarMeasure, GridScalarMeasure)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ei, ej) = (basis_vector(n, i), basis_vector(n, j));
            let plus = measure_of(&(&ei + &ej))?;
            let minus = measure_of(&(&ei - &ej))?;
            let plus_i = measure_of(&(&ei + &ej * IMAG))?;
            let minus_i = measure_of(&(&ei - &ej * IMAG))?;
            // μ(e_i, e_j) = (E e_i, e_j) is the (j, i) entry; swapping the roles
            // of e_i and e_j exchanges the two imaginary combinations.
            let ji = polarize([&plus, &minus, &plus_i, &minus_i])?;
            let ij = polarize([&plus, &minus, &minus_i, &plus_i])?;
            Ok((i, j, ij, ji))
        })
        .collect::<Result<_>>()?;
    for (i, j, ij, ji) in off {
        for ((a, b, w_ij), (_, _, w_ji)) in ij.cells().zip(ji.cells()) {
            let atom = &mut atoms[(a - 1) * n2 + (b - 1)];
            atom[(i, j)] = w_ij;
            atom[(j, i)] = w_ji;
        }
    }
    GridOperatorMeasure::new(n1, n2, n, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{c64, identity, ONE};
    use crate::linalg::{EmbeddedSpace, UnitaryOperator};
    use crate::pair::{spectral_function, CommutingUnitaryPair, FnPair};
    use crate::random::random_grid_pair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coarse() -> SampleGrid {
        SampleGrid::with_angles(4).unwrap()
    }

    #[test]
    fn scalar_pair_at_minus_one() {
        let u = UnitaryOperator::new(CMatrix::from_element(1, 1, -ONE)).unwrap();
        let pair = CommutingUnitaryPair::new(EmbeddedSpace::identity(1), u.clone(), u).unwrap();
        let e = operator_measure_from_sampler(&pair, 2, 2, &coarse()).unwrap();
        for (j, k, a) in e.cells() {
            let expected = if (j, k) == (1, 1) { 1.0 } else { 0.0 };
            assert!((a[(0, 0)] - c64(expected, 0.0)).norm() < 1e-10, "({j},{k}) {a}");
        }
    }

    #[test]
    fn matches_joint_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pair = random_grid_pair(&mut rng, 2, 4, 4);
        let e = operator_measure_from_sampler(&pair, 4, 4, &coarse()).unwrap();
        assert!(e.normalization_residual() < 1e-8);
        let atlas = spectral_function(&pair).unwrap();
        let mut expected = vec![CMatrix::zeros(2, 2); 16];
        for atom in &atlas.atoms {
            let j = (atom.theta1 * 4.0 / std::f64::consts::TAU).round() as usize;
            let k = (atom.theta2 * 4.0 / std::f64::consts::TAU).round() as usize;
            expected[(j - 1) * 4 + (k - 1)] += &atom.weight;
        }
        for (j, k, a) in e.cells() {
            assert!((a - &expected[(j - 1) * 4 + (k - 1)]).norm() < 1e-8);
        }
    }

    #[test]
    fn identity_is_not_a_resolvent() {
        let f = FnPair::new(1, |_, _| Ok(identity(1)));
        assert!(matches!(
            operator_measure_from_sampler(&f, 2, 2, &coarse()),
            Err(Error::NotAResolvent(_))
        ));
    }
}
