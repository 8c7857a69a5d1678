//! Values at `∞` of two-variable samplers, exact where the sampler knows
//! them and by extrapolation along the positive real axis otherwise.

use crate::error::{Error, Result};
use crate::linalg::matrix::{CMatrix, ExtPoint, C64};
use crate::tol;

use super::commuting::PairSampler;

/// Radii at which a function is sampled on the way to `∞`.
pub const LIMIT_RADII: [f64; 3] = [1e3, 1e4, 1e5];

/// Limit as `ρ → ∞` of `f(ρ)`, extrapolated in `u = 1/ρ`.
///
/// A quadratic fit through all three radii is returned. The linear fit
/// through the two largest radii must agree with it to within `LIMIT`,
/// otherwise the function is reported as divergent.
pub fn limit_at_infinity(f: impl Fn(f64) -> Result<CMatrix>) -> Result<CMatrix> {
    let values = LIMIT_RADII.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
    let u: Vec<f64> = LIMIT_RADII.iter().map(|r| 1.0 / r).collect();
    let quadratic = extrapolate(&u, &values);
    let linear = extrapolate(&u[1..], &values[1..]);
    let spread = (&quadratic - &linear).norm();
    if !spread.is_finite() || spread > tol::LIMIT {
        return Err(Error::LimitDivergence(spread));
    }
    Ok(quadratic)
}

/// Lagrange extrapolation of the samples `(u_i, v_i)` to `u = 0`.
fn extrapolate(u: &[f64], v: &[CMatrix]) -> CMatrix {
    let mut acc = CMatrix::zeros(v[0].nrows(), v[0].ncols());
    for i in 0..u.len() {
        let mut w = 1.0;
        for j in 0..u.len() {
            if i != j {
                w *= u[j] / (u[j] - u[i]);
            }
        }
        acc += v[i].scale(w);
    }
    acc
}

/// Value of the sampler at a point of `(𝕋_e ∪ {∞})²`.
///
/// Finite arguments go straight to the sampler. At `∞` the sampler's exact
/// value is used when available; otherwise the limits are taken in the
/// iterated order `z₁` first, then `z₂`.
pub fn extended_eval<S: PairSampler + ?Sized>(s: &S, z1: ExtPoint, z2: ExtPoint) -> Result<CMatrix> {
    match (z1, z2) {
        (ExtPoint::Finite(a), ExtPoint::Finite(b)) => s.eval(a, b),
        _ => match s.eval_exact(z1, z2) {
            Some(v) => v,
            None => numeric_extended_eval(s, z1, z2),
        },
    }
}

/// As [`extended_eval`] but always through numerical limits.
pub fn numeric_extended_eval<S: PairSampler + ?Sized>(s: &S, z1: ExtPoint, z2: ExtPoint) -> Result<CMatrix> {
    let real = |r: f64| C64::new(r, 0.0);
    match (z1, z2) {
        (ExtPoint::Finite(a), ExtPoint::Finite(b)) => s.eval(a, b),
        (ExtPoint::Infinity, ExtPoint::Finite(b)) => limit_at_infinity(|r| s.eval(real(r), b)),
        (ExtPoint::Finite(a), ExtPoint::Infinity) => limit_at_infinity(|r| s.eval(a, real(r))),
        (ExtPoint::Infinity, ExtPoint::Infinity) => {
            limit_at_infinity(|r2| limit_at_infinity(|r1| s.eval(real(r1), real(r2))))
        }
    }
}

/// A sampler together with its values at `∞`.
pub struct ExtendedSampler<S> {
    pub inner: S,
}

impl<S: PairSampler> ExtendedSampler<S> {
    pub fn new(inner: S) -> Self {
        Self { inner }
    }

    pub fn eval(&self, z1: ExtPoint, z2: ExtPoint) -> Result<CMatrix> {
        extended_eval(&self.inner, z1, z2)
    }
}

/// The extension of a sampler to `∞` by limits.
pub fn extend_to_infinity<S: PairSampler>(f: S) -> ExtendedSampler<S> {
    ExtendedSampler::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;
    use crate::pair::commuting::scalar_pair;

    #[test]
    fn constant_limits() {
        let f = extend_to_infinity(scalar_pair(|_, _| C64::new(2.5, -1.0)));
        let v = f.eval(ExtPoint::Infinity, ExtPoint::Infinity).unwrap();
        assert!((v[(0, 0)] - C64::new(2.5, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn unbounded_function_diverges() {
        let f = extend_to_infinity(scalar_pair(|a, _| a));
        assert!(matches!(
            f.eval(ExtPoint::Infinity, ExtPoint::from(0.5)),
            Err(Error::LimitDivergence(_))
        ));
    }

    #[test]
    fn cayley_kernel_limit_is_minus_one() {
        let k = |z: C64| (ONE + z) / (ONE - z);
        let f = extend_to_infinity(scalar_pair(move |a, b| k(a) * k(b)));
        let v = f.eval(ExtPoint::Infinity, ExtPoint::Infinity).unwrap();
        assert!((v[(0, 0)] - ONE).norm() < 1e-9);
        let w = f.eval(ExtPoint::Infinity, ExtPoint::from(0.0)).unwrap();
        assert!((w[(0, 0)] + ONE).norm() < 1e-9);
    }
}
