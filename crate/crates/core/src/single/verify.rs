//! Condition verifiers for single-operator generalized resolvents.

use std::collections::HashMap;
use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::Result;
use crate::grid::SampleGrid;
use crate::linalg::matrix::{hermitian_eigen, identity, max_column_norm, mirror, CMatrix, C64};
use crate::linalg::subspace::orthonormalize;
use crate::linalg::Subspace;
use crate::report::{ConditionResult, VerificationReport};
use crate::tol;

use super::isometry::PartialIsometry;
use super::resolvent::ResolventSampler;

/// Circle and node count of the Cauchy reproduction check.
const CAUCHY_RADIUS: f64 = 0.7;
const CAUCHY_NODES: usize = 256;

/// Test points of the Cauchy check, all with `|z| ≤ 0.4`.
fn cauchy_points() -> Vec<C64> {
    let mut pts = vec![C64::new(0.0, 0.0)];
    for &r in &[0.2, 0.4] {
        for k in 0..4 {
            pts.push(C64::from_polar(r, TAU * (k as f64 + 0.5) / 4.0));
        }
    }
    pts
}

/// Samples of `R` at every point the verifiers need, evaluated once.
struct SampleTable {
    values: HashMap<(u64, u64), Result<CMatrix>>,
}

impl SampleTable {
    fn build<R: ResolventSampler>(r: &R, points: &[C64]) -> Self {
        let values = points
            .par_iter()
            .map(|&z| (key(z), r.resolvent(z)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        Self { values }
    }

    fn get(&self, z: C64) -> Option<&CMatrix> {
        self.values.get(&key(z)).and_then(|r| r.as_ref().ok())
    }
}

fn key(z: C64) -> (u64, u64) {
    (z.re.to_bits(), z.im.to_bits())
}

fn needed_points(grid: &SampleGrid, extra: &[C64]) -> Vec<C64> {
    let mut pts = grid.finite_points();
    pts.extend(cauchy_points());
    for k in 0..CAUCHY_NODES {
        pts.push(C64::from_polar(CAUCHY_RADIUS, TAU * k as f64 / CAUCHY_NODES as f64));
    }
    pts.extend_from_slice(extra);
    pts
}

/// Runs `f` over `points`, returning the largest residual or `∞` if any sample is missing.
fn worst<'a>(points: impl IntoIterator<Item = C64>, mut f: impl FnMut(C64) -> Option<f64> + 'a) -> f64 {
    let mut acc = 0.0f64;
    for z in points {
        match f(z) {
            Some(v) if v.is_finite() => acc = acc.max(v),
            _ => return f64::INFINITY,
        }
    }
    acc
}

/// Condition 3: `Re (R_ζ h, h) ≥ ½‖h‖²` on the disk, reported as the largest
/// shortfall of the smallest eigenvalue of `Re R_ζ` below `½`.
fn dissipativity(table: &SampleTable, grid: &SampleGrid) -> f64 {
    let mut pts = vec![C64::new(0.0, 0.0)];
    pts.extend(grid.interior());
    worst(pts, |z| {
        let r = table.get(z)?;
        let min = hermitian_eigen(r).0.first().copied().unwrap_or(0.5);
        Some((0.5 - min).max(0.0))
    })
}

/// Condition 4: Cauchy reproduction `R_{z₀} = (1/N) Σ R_{z_j} z_j / (z_j − z₀)` on `|z| = 0.7`.
fn analyticity(table: &SampleTable, n: usize) -> f64 {
    let nodes: Vec<C64> = (0..CAUCHY_NODES)
        .map(|k| C64::from_polar(CAUCHY_RADIUS, TAU * k as f64 / CAUCHY_NODES as f64))
        .collect();
    let mut values = Vec::with_capacity(nodes.len());
    for &z in &nodes {
        match table.get(z) {
            Some(m) => values.push(m),
            None => return f64::INFINITY,
        }
    }
    worst(cauchy_points(), |z0| {
        let direct = table.get(z0)?;
        let mut acc = CMatrix::zeros(n, n);
        for (z, m) in nodes.iter().zip(&values) {
            acc += *m * (*z / (*z - z0));
        }
        acc /= C64::new(CAUCHY_NODES as f64, 0.0);
        Some((direct - acc).norm())
    })
}

/// Condition 5: `R_ζᴴ = I − R_{1/ζ̄}` for `ζ ∈ 𝔻 \ {0}`.
fn reflection(table: &SampleTable, grid: &SampleGrid, n: usize) -> f64 {
    let id = identity(n);
    worst(grid.interior(), |z| {
        let a = table.get(z)?;
        let b = table.get(mirror(z))?;
        Some((a.adjoint() - (&id - b)).norm())
    })
}

/// `‖(R₀ − I) B‖` over an orthonormal basis `B` of the subspace.
fn fixes_subspace(table: &SampleTable, sub: &Subspace, n: usize) -> f64 {
    match table.get(C64::new(0.0, 0.0)) {
        Some(r0) => max_column_norm(&((r0 - identity(n)) * sub.basis())),
        None => f64::INFINITY,
    }
}

fn shape_failure(ids: &[&str]) -> VerificationReport {
    VerificationReport::new(ids.iter().map(|id| ConditionResult::failed(*id, tol::ACCEPT)).collect())
}

/// Checks the five characteristic conditions of a generalized resolvent of
/// some closed isometric operator, for a given point `ζ₀` and subspace `L`.
pub fn verify_theorem_1_2<R: ResolventSampler>(
    r: &R,
    zeta0: C64,
    l: &Subspace,
    grid: &SampleGrid,
) -> VerificationReport {
    let n = r.dim();
    let ids = ["1", "2", "3", "4", "5"];
    if l.ambient_dim() != n || !(zeta0.norm() > 0.0 && zeta0.norm() < 1.0) {
        return shape_failure(&ids);
    }
    let table = SampleTable::build(r, &needed_points(grid, &[zeta0]));
    let Some(r0) = table.get(zeta0).cloned() else {
        return shape_failure(&ids);
    };
    let f = l.basis();
    let c1 = worst(grid.finite_points(), |z| {
        let rz = table.get(z)?;
        let lhs = (rz * z - &r0 * zeta0) * f;
        let rhs = rz * &r0 * f * (z - zeta0);
        Some(max_column_norm(&(lhs - rhs)))
    });
    let fixed = orthonormalize(&(&r0 * f)).complement();
    VerificationReport::new(vec![
        ConditionResult::new("1", c1, tol::ACCEPT),
        ConditionResult::new("2", fixes_subspace(&table, &fixed, n), tol::ACCEPT),
        ConditionResult::new("3", dissipativity(&table, grid), tol::ACCEPT),
        ConditionResult::new("4", analyticity(&table, n), tol::ANALYTIC),
        ConditionResult::new("5", reflection(&table, grid, n), tol::ACCEPT),
    ])
}

/// Checks the five characteristic conditions of a generalized resolvent of
/// the given isometric operator `V`.
pub fn verify_theorem_1_3<R: ResolventSampler>(v: &PartialIsometry, r: &R, grid: &SampleGrid) -> VerificationReport {
    let n = r.dim();
    if v.dim() != n {
        return shape_failure(&["1", "2", "3", "4", "5"]);
    }
    let table = SampleTable::build(r, &needed_points(grid, &[]));
    let g = v.domain().basis();
    let vg = v.action();
    let c1 = worst(grid.finite_points(), |z| {
        let rz = table.get(z)?;
        let moved = g - vg * z;
        Some(max_column_norm(&(rz * moved - g)))
    });
    VerificationReport::new(vec![
        ConditionResult::new("1", c1, tol::ACCEPT),
        ConditionResult::new("2", fixes_subspace(&table, &v.defect_domain(), n), tol::ACCEPT),
        ConditionResult::new("3", dissipativity(&table, grid), tol::ACCEPT),
        ConditionResult::new("4", analyticity(&table, n), tol::ANALYTIC),
        ConditionResult::new("5", reflection(&table, grid, n), tol::ACCEPT),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{basis_vector, c64};
    use crate::single::resolvent::{ChumakinSampler, FnSampler};
    use crate::single::schur::SchurParameter;

    fn span(n: usize, i: usize) -> Subspace {
        Subspace::from_orthonormal(CMatrix::from_column_slice(n, 1, basis_vector(n, i).as_slice())).unwrap()
    }

    fn shift() -> PartialIsometry {
        PartialIsometry::new(span(2, 0), span(2, 1).basis().clone()).unwrap()
    }

    #[test]
    fn constant_identity_passes_for_trivial_operator() {
        let r = FnSampler::new(1, |z: C64| {
            if z.norm() < 1.0 {
                Ok(identity(1))
            } else {
                Ok(CMatrix::zeros(1, 1))
            }
        });
        let grid = SampleGrid::default();
        let rep = verify_theorem_1_2(&r, c64(0.5, 0.0), &Subspace::zero(1), &grid);
        assert!(rep.overall_pass, "{rep:?}");
        let rep = verify_theorem_1_3(&PartialIsometry::trivial(1), &r, &grid);
        assert!(rep.overall_pass, "{rep:?}");
    }

    #[test]
    fn doubled_identity_fails_condition_two() {
        let r = FnSampler::new(1, |_| Ok(identity(1) * c64(2.0, 0.0)));
        let rep = verify_theorem_1_2(&r, c64(0.5, 0.0), &Subspace::zero(1), &SampleGrid::default());
        assert!(rep.fails("2"));
    }

    #[test]
    fn chumakin_resolvent_of_shift_passes() {
        let v = shift();
        let phi = SchurParameter::zero(v.defect_domain(), v.defect_range());
        let r = ChumakinSampler::new(v.clone(), phi).unwrap();
        let rep = verify_theorem_1_3(&v, &r, &SampleGrid::default());
        assert!(rep.overall_pass, "{rep:?}");
        let zeta0 = c64(0.3, 0.2);
        let l = orthonormalize(&(v.domain().basis() - v.action() * zeta0));
        let rep = verify_theorem_1_2(&r, zeta0, &l, &SampleGrid::default());
        assert!(rep.overall_pass, "{rep:?}");
        assert!(rep.max_residual() <= 1e-8);
    }

    #[test]
    fn resolvent_of_wrong_operator_fails_condition_one() {
        let v = shift();
        let id = FnSampler::new(2, |z: C64| {
            if z.norm() < 1.0 {
                Ok(identity(2))
            } else {
                Ok(CMatrix::zeros(2, 2))
            }
        });
        let rep = verify_theorem_1_3(&v, &id, &SampleGrid::default());
        assert!(rep.fails("1"));
    }
}
