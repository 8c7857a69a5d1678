//! Membership test for Korányi's class of two-variable functions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{PairPoints, SampleGrid};
use crate::linalg::matrix::{quadratic_form, CMatrix, CVector, C64};

use super::commuting::PairSampler;
use super::limits::extended_eval;

/// Tolerance of the three class conditions.
pub const H2_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H2Report {
    pub condition_a_residual: f64,
    pub condition_b_min: f64,
    pub condition_c_residual: f64,
    pub pass: bool,
    pub grid: SampleGrid,
}

impl H2Report {
    fn new(a: f64, b: f64, c: f64, grid: SampleGrid) -> Self {
        let pass = a <= H2_TOL && b >= -H2_TOL && c <= H2_TOL;
        Self {
            condition_a_residual: a,
            condition_b_min: b,
            condition_c_residual: c,
            pass,
            grid,
        }
    }

    fn failed(grid: SampleGrid) -> Self {
        Self {
            condition_a_residual: f64::INFINITY,
            condition_b_min: f64::NEG_INFINITY,
            condition_c_residual: f64::INFINITY,
            pass: false,
            grid,
        }
    }
}

/// Values of a sampler on the product of the two-variable point set with itself.
pub struct PairTable {
    pub points: PairPoints,
    dim: usize,
    values: Vec<CMatrix>,
}

impl PairTable {
    pub fn build<S: PairSampler + ?Sized>(s: &S, grid: &SampleGrid) -> Result<Self> {
        let points = grid.pair_points();
        let m = points.len();
        let rows: Vec<Result<Vec<CMatrix>>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (0..m)
                    .map(|j| extended_eval(s, points.points[i], points.points[j]))
                    .collect()
            })
            .collect();
        let mut values = Vec::with_capacity(m * m);
        for row in rows {
            values.extend(row?);
        }
        Ok(Self {
            points,
            dim: s.dim(),
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &CMatrix {
        &self.values[i * self.points.len() + j]
    }

    /// The scalar table `(R h, h)`.
    pub fn quadratic(&self, h: &CVector) -> Vec<C64> {
        self.values.iter().map(|m| quadratic_form(m, h)).collect()
    }
}

/// Checks conditions (a), (b), (c) on a table of scalar values indexed like
/// [`PairTable`]. The imaginary part of the kernel in (b) counts toward (a).
pub fn check_h2_table(f: &[C64], points: &PairPoints, grid: &SampleGrid) -> H2Report {
    let m = points.len();
    let at = |i: usize, j: usize| f[i * m + j];
    let mir = &points.mirror_of;
    let mut a = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            a = a.max((at(mir[i], mir[j]) - at(i, j).conj()).norm());
        }
    }
    let mut b = f64::INFINITY;
    for i in points.disk_indices() {
        for j in points.disk_indices() {
            let k = at(i, j) - at(mir[i], j) - at(i, mir[j]) + at(mir[i], mir[j]);
            b = b.min(k.re);
            a = a.max(k.im.abs());
        }
    }
    let (zero, inf) = (points.zero_index(), points.infinity_index());
    let mut c = 0.0f64;
    for i in 0..m {
        c = c.max((at(i, zero) + at(i, inf)).norm());
        c = c.max((at(zero, i) + at(inf, i)).norm());
    }
    if f.iter().any(|z| !z.is_finite()) {
        return H2Report::failed(grid.clone());
    }
    H2Report::new(a, b, c, grid.clone())
}

/// Evaluates a scalar (`1 × 1`) sampler on the grid and checks class membership.
/// Failures to evaluate, including divergent limits, fail the report.
pub fn check_h2_membership<S: PairSampler + ?Sized>(f: &S, grid: &SampleGrid) -> Result<H2Report> {
    if f.dim() != 1 {
        return Err(Error::Shape(format!("expected a scalar function, found dimension {}", f.dim())));
    }
    match PairTable::build(f, grid) {
        Ok(table) => {
            let values: Vec<C64> = table.values.iter().map(|m| m[(0, 0)]).collect();
            Ok(check_h2_table(&values, &table.points, grid))
        }
        Err(Error::LimitDivergence(_)) => Ok(H2Report::failed(grid.clone())),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;
    use crate::pair::commuting::scalar_pair;

    #[test]
    fn kernel_product_is_in_class() {
        let k = |z: C64| (ONE + z) / (ONE - z);
        let f = scalar_pair(move |a, b| k(a) * k(b));
        let r = check_h2_membership(&f, &SampleGrid::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn constant_fails_balance_condition() {
        let f = scalar_pair(|_, _| ONE);
        let r = check_h2_membership(&f, &SampleGrid::default()).unwrap();
        assert!(!r.pass);
        assert!((r.condition_c_residual - 2.0).abs() < 1e-9);
    }
}
