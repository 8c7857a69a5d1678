use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::moments::GridOperatorMeasure;
use crate::pair::{extended_eval, pair_resolvent, CommutingUnitaryPair, PairSampler};
use crate::tol;

use super::family::{build_commuting_unitaries, build_spectral_families};
use super::naimark::{naimark_dilate, naimark_dilate_minimal, NaimarkDilation};
use super::recover::operator_measure_from_sampler;

/// Default bound on the reproduction residual of a rebuilt pair.
pub const CERTIFY_TOL: f64 = tol::CERTIFY;

#[derive(Clone, Debug)]
pub struct ReconstructOptions {
    pub minimal: bool,
    pub tolerance: f64,
    pub grid: SampleGrid,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            minimal: false,
            tolerance: CERTIFY_TOL,
            grid: SampleGrid::default(),
        }
    }
}

/// Outcome of a reconstruction: the rebuilt pair, its dilation and the
/// largest deviation from the input on the sample grid.
#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    #[serde(skip)]
    pub pair: CommutingUnitaryPair,
    #[serde(skip)]
    pub dilation: NaimarkDilation,
    #[serde(skip)]
    pub measure: GridOperatorMeasure,
    pub residual: f64,
    pub tolerance: f64,
    pub commutator: f64,
    pub grid: [usize; 2],
    pub pass: bool,
    /// Suggested grid size when the certification fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_hint: Option<usize>,
}

/// Dilation, spectral families and commuting unitaries for a measure.
pub fn rebuild_from_measure(e: &GridOperatorMeasure, minimal: bool) -> Result<(NaimarkDilation, CommutingUnitaryPair)> {
    let d = if minimal { naimark_dilate_minimal(e)? } else { naimark_dilate(e)? };
    let fam = build_spectral_families(&d, e.n1(), e.n2())?;
    let pair = build_commuting_unitaries(&fam, &d)?;
    Ok((d, pair))
}

/// `max ‖pair_resolvent(pair, z₁, z₂) − R(z₁, z₂)‖_F` over the two-variable
/// sample points, `∞` included.
pub fn reproduction_residual<S: PairSampler + ?Sized>(
    pair: &CommutingUnitaryPair,
    r: &S,
    grid: &SampleGrid,
) -> Result<f64> {
    if pair.small_dim() != r.dim() {
        return Err(Error::Shape(format!(
            "rebuilt pair acts on dimension {}, sampler on {}",
            pair.small_dim(),
            r.dim()
        )));
    }
    let pts = grid.pair_points().points;
    let rows: Vec<Result<f64>> = pts
        .par_iter()
        .map(|&a| {
            let mut worst = 0.0f64;
            for &b in &pts {
                let built = pair_resolvent(pair, a, b)?;
                worst = worst.max((built - extended_eval(r, a, b)?).norm());
            }
            Ok(worst)
        })
        .collect();
    rows.into_iter().try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

/// Measure recovery, dilation, spectral families and unitaries, followed by a
/// check that the rebuilt pair reproduces `R` on `opts.grid`.
pub fn reconstruct_and_certify<S: PairSampler + ?Sized>(
    r: &S,
    n1: usize,
    n2: usize,
    opts: &ReconstructOptions,
) -> Result<Certification> {
    let e = operator_measure_from_sampler(r, n1, n2, &opts.grid)?;
    let (dilation, pair) = rebuild_from_measure(&e, opts.minimal)?;
    let residual = reproduction_residual(&pair, r, &opts.grid)?;
    Ok(certify(pair, dilation, e, residual, opts.tolerance))
}

/// Skips recovery: dilates `e` and compares against its own kernel sum.
pub fn reconstruct_from_measure(e: &GridOperatorMeasure, opts: &ReconstructOptions) -> Result<Certification> {
    let (dilation, pair) = rebuild_from_measure(e, opts.minimal)?;
    let source = crate::moments::MeasureResolvent(e.clone());
    let residual = reproduction_residual(&pair, &source, &opts.grid)?;
    Ok(certify(pair, dilation, e.clone(), residual, opts.tolerance))
}

fn certify(
    pair: CommutingUnitaryPair,
    dilation: NaimarkDilation,
    measure: GridOperatorMeasure,
    residual: f64,
    tolerance: f64,
) -> Certification {
    let pass = residual.is_finite() && residual <= tolerance;
    let grid = [measure.n1(), measure.n2()];
    Certification {
        commutator: pair.commutator(),
        refinement_hint: (!pass).then(|| 2 * grid[0].max(grid[1])),
        pair,
        dilation,
        measure,
        residual,
        tolerance,
        grid,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{CMatrix, C64, ONE};
    use crate::pair::FnPair;
    use crate::random::{random_grid_pair, random_pair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn opts() -> ReconstructOptions {
        ReconstructOptions {
            grid: SampleGrid::with_angles(4).unwrap(),
            ..Default::default()
        }
    }

    #[test]
    fn scalar_kernel_product() {
        let k = |z: C64| (ONE - z) / (ONE + z);
        let f = FnPair::new(1, move |a, b| Ok(CMatrix::from_element(1, 1, k(a) * k(b))));
        let c = reconstruct_and_certify(&f, 2, 2, &opts()).unwrap();
        assert!(c.pass);
        assert!(c.residual <= 1e-10, "{}", c.residual);
        assert_eq!(c.pair.big_dim(), 1);
    }

    #[test]
    fn grid_pair_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [2, 4] {
            let pair = random_grid_pair(&mut rng, 2, 5, n);
            for minimal in [false, true] {
                let o = ReconstructOptions { minimal, ..opts() };
                let c = reconstruct_and_certify(&pair, n, n, &o).unwrap();
                assert!(c.pass, "n={n} residual {}", c.residual);
                assert!(c.commutator <= 1e-10);
            }
        }
    }

    #[test]
    fn off_grid_spectrum_is_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pair = random_pair(&mut rng, 1, 3);
        match reconstruct_and_certify(&pair, 2, 2, &opts()) {
            Ok(c) => assert!(!c.pass && c.refinement_hint == Some(4)),
            Err(Error::NegativeAtom { hint, .. }) => assert_eq!(hint, 4),
            Err(e) => panic!("unexpected {e}"),
        }
    }
}
