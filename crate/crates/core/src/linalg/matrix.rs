use std::f64::consts::TAU;

use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const IMAG: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// A point of the extended complex plane. `Infinity` is the point at
/// infinity reached by resolvent-type functions through `U(∞) = -I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtPoint {
    Finite(C64),
    Infinity,
}

impl ExtPoint {
    /// The reflection `z ↦ 1/z̄` across the unit circle, exchanging `0` and `∞`.
    pub fn mirror(self) -> ExtPoint {
        match self {
            ExtPoint::Infinity => ExtPoint::Finite(ZERO),
            ExtPoint::Finite(z) if z == ZERO => ExtPoint::Infinity,
            ExtPoint::Finite(z) => ExtPoint::Finite(mirror(z)),
        }
    }

    pub fn finite(self) -> Option<C64> {
        match self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }

    /// True for points of the open unit disk.
    pub fn is_interior(self) -> bool {
        matches!(self, ExtPoint::Finite(z) if z.norm() < 1.0)
    }
}

impl From<C64> for ExtPoint {
    fn from(z: C64) -> Self {
        ExtPoint::Finite(z)
    }
}

impl From<f64> for ExtPoint {
    fn from(x: f64) -> Self {
        ExtPoint::Finite(c64(x, 0.0))
    }
}

/// `1/z̄` for finite nonzero `z`.
#[inline]
pub fn mirror(z: C64) -> C64 {
    ONE / z.conj()
}

/// Rejects arguments on the unit circle.
pub fn check_off_circle(z: C64) -> Result<()> {
    if (z.norm() - 1.0).abs() <= tol::CIRCLE || !z.is_finite() {
        Err(Error::UnitModulusArgument(z))
    } else {
        Ok(())
    }
}

/// Argument of a unimodular number, normalized to `(0, 2π]`.
pub fn unit_angle(z: C64) -> f64 {
    let a = z.arg().rem_euclid(TAU);
    if a <= 0.0 || a >= TAU - 1e-15 {
        TAU
    } else {
        a
    }
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `‖AB - BA‖_F`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// `(R h, h)` with the inner product linear in the first slot.
pub fn quadratic_form(m: &CMatrix, h: &CVector) -> C64 {
    h.dotc(&(m * h))
}

/// `(R h, g)`.
pub fn sesquilinear_form(m: &CMatrix, h: &CVector, g: &CVector) -> C64 {
    g.dotc(&(m * h))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Largest column 2-norm; the worst-case residual over a basis stored column-wise.
pub fn max_column_norm(m: &CMatrix) -> f64 {
    m.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Eigenvalues (ascending) and eigenvectors of the Hermitian part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Smallest eigenvalue of the Hermitian part (`+∞` for the empty matrix).
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(f64::INFINITY)
}

/// Square root of a positive semidefinite matrix; eigenvalues are clamped at zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let roots = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c64(v.max(0.0).sqrt(), 0.0)),
    );
    &vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint()
}

/// Eigen-decomposition of a normal matrix through its complex Schur form.
/// For normal input the Schur vectors are eigenvectors.
pub fn normal_eigen(m: &CMatrix) -> (Vec<C64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let (q, t) = Schur::new(m.clone()).unpack();
    let values = (0..n).map(|i| t[(i, i)]).collect();
    (values, q)
}

/// Rotates each column so that its first largest-modulus entry is real positive.
pub fn canonicalize_phases(m: &mut CMatrix) {
    for mut col in m.column_iter_mut() {
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            continue;
        }
        if let Some(z) = col.iter().find(|z| z.norm() >= peak - 1e-12).copied() {
            let phase = z.conj() / z.norm();
            col.iter_mut().for_each(|x| *x *= phase);
        }
    }
}

/// Inverse with a condition-number guard. The estimate `‖A‖_F ‖A⁻¹‖_F`
/// bounds the 2-norm condition number from above.
pub fn inverse_checked(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Shape(format!("cannot invert {}x{}", n, a.ncols())));
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let inv = a
        .clone()
        .try_inverse()
        .ok_or(Error::SingularResolvent(f64::INFINITY))?;
    let kappa = a.norm() * inv.norm() / n as f64;
    if !kappa.is_finite() || kappa > tol::KAPPA_MAX || !all_finite(&inv) {
        return Err(Error::SingularResolvent(kappa));
    }
    Ok(inv)
}

/// Builds a complex matrix from row-major `(re, im)` pairs.
pub fn from_rows(rows: &[&[C64]]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, c, |i, j| rows[i][j])
}

pub fn diag(values: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_column_slice(values))
}

/// Standard basis vector `e_i` of `ℂⁿ`.
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = ONE;
    v
}

/// Standard basis plus the polarization combinations `e_i ± e_j`, `e_i ± i e_j`.
/// The quadratic forms on these vectors determine a sesquilinear form.
pub fn polarization_vectors(n: usize) -> Vec<CVector> {
    let mut out: Vec<CVector> = (0..n).map(|i| basis_vector(n, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ei, ej) = (basis_vector(n, i), basis_vector(n, j));
            out.push(&ei + &ej);
            out.push(&ei - &ej);
            out.push(&ei + &ej * IMAG);
            out.push(&ei - &ej * IMAG);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn angle_zero_maps_to_two_pi() {
        assert_eq!(unit_angle(ONE), TAU);
        assert_abs_diff_eq!(unit_angle(IMAG), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(unit_angle(-IMAG), 3.0 * PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(unit_angle(-ONE), PI, epsilon = 1e-15);
    }

    #[test]
    fn mirror_swaps_zero_and_infinity() {
        assert_eq!(ExtPoint::from(0.0).mirror(), ExtPoint::Infinity);
        assert_eq!(ExtPoint::Infinity.mirror(), ExtPoint::from(0.0));
        let z = c64(0.3, 0.4);
        let m = ExtPoint::from(z).mirror().finite().unwrap();
        assert_abs_diff_eq!((m - c64(1.2, 1.6)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn circle_rejected() {
        assert!(check_off_circle(c64(0.6, 0.8)).is_err());
        assert!(check_off_circle(c64(0.6, 0.7)).is_ok());
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = from_rows(&[&[c64(2.0, 0.0), c64(0.0, 1.0)], &[c64(0.0, -1.0), c64(2.0, 0.0)]]);
        let s = psd_sqrt(&a);
        assert_abs_diff_eq!((&s * &s - &a).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn polarization_count() {
        assert_eq!(polarization_vectors(3).len(), 3 + 4 * 3);
    }

    #[test]
    fn singular_bracket_rejected() {
        let a = from_rows(&[&[ONE, ONE], &[ONE, ONE]]);
        assert!(matches!(inverse_checked(&a), Err(Error::SingularResolvent(_))));
    }
}
