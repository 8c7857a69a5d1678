use crate::error::{Error, Result};

use super::fft::fft2;
use super::measure::GridScalarMeasure;
use super::table::{MomentKind, MomentTable};

/// Recovers the weights of a measure on the `n₁ × n₂` grid from its moments
/// `s_{k,l}`, `0 ≤ k < n₁`, `0 ≤ l < n₂`, by an inverse finite Fourier transform.
pub fn invert_grid_measure(t: &MomentTable, n1: usize, n2: usize) -> Result<GridScalarMeasure> {
    if t.kind != MomentKind::Trigonometric {
        return Err(Error::Shape("grid inversion needs trigonometric moments".into()));
    }
    if n1 == 0 || n2 == 0 {
        return Err(Error::Shape("grid sizes must be positive".into()));
    }
    let mut data = Vec::with_capacity(n1 * n2);
    for k in 0..n1 as i64 {
        for l in 0..n2 as i64 {
            data.push(t.get(k, l).ok_or_else(|| {
                Error::Shape(format!("moment ({k}, {l}) missing for a {n1}x{n2} grid"))
            })?);
        }
    }
    fft2(&mut data, n1, n2);
    let scale = 1.0 / (n1 * n2) as f64;
    let mut m = GridScalarMeasure::zeros(n1, n2);
    for j in 1..=n1 {
        for k in 1..=n2 {
            m.set(j, k, data[(j % n1) * n2 + (k % n2)] * scale);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{C64, ONE};
    use crate::moments::table::moments_from_measure;

    #[test]
    fn recovers_atom_at_pi() {
        let m = GridScalarMeasure::atom(2, 2, 1, 1, ONE);
        let back = invert_grid_measure(&moments_from_measure(&m, 1, 1), 2, 2).unwrap();
        for (j, k, w) in back.cells() {
            let expected = if (j, k) == (1, 1) { ONE } else { C64::new(0.0, 0.0) };
            assert!((w - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn uniform_measure_has_delta_moments() {
        let m = GridScalarMeasure::new(2, 2, vec![ONE * 0.25; 4]).unwrap();
        let t = moments_from_measure(&m, 1, 1);
        assert!((t.get(0, 0).unwrap() - ONE).norm() < 1e-15);
        assert!(t.get(1, 0).unwrap().norm() < 1e-15);
        assert!(t.get(1, 1).unwrap().norm() < 1e-15);
        let back = invert_grid_measure(&t, 2, 2).unwrap();
        assert!(back.cells().all(|(_, _, w)| (w - ONE * 0.25).norm() < 1e-15));
    }

    #[test]
    fn zero_moments_give_zero_measure() {
        let t = MomentTable::zeros(MomentKind::Trigonometric, 0..=3, 0..=3);
        assert_eq!(invert_grid_measure(&t, 4, 4).unwrap().max_abs(), 0.0);
    }
}
