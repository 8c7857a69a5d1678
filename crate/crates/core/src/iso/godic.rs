use crate::linalg::matrix::{canonicalize_phases, diag, normal_eigen, CMatrix, C64};
use crate::linalg::{Conjugation, UnitaryOperator};

/// Factors a unitary as a product of two conjugations, `U₀ = K∘L`.
///
/// With `U₀ = W D Wᴴ`, `L` is entrywise conjugation in the eigenbasis,
/// `x ↦ W conj(Wᴴ x)`, and `K` is `x ↦ W D conj(Wᴴ x)`. Their matrices
/// `W Wᵀ` and `W D Wᵀ` are symmetric and unitary. Eigenvectors are phase
/// normalized so that a diagonal input gives `W = I`.
pub fn godic_lucenko_factor(u0: &UnitaryOperator) -> (Conjugation, Conjugation) {
    let n = u0.dim();
    if n == 0 {
        return (Conjugation::standard(0), Conjugation::standard(0));
    }
    let (values, mut w) = normal_eigen(u0.matrix());
    canonicalize_phases(&mut w);
    let d: Vec<C64> = values.iter().map(|v| v / v.norm()).collect();
    let k = &w * diag(&d) * w.transpose();
    let l = &w * w.transpose();
    (
        Conjugation::new(symmetrize(k)).expect("eigenbasis factor is a conjugation"),
        Conjugation::new(symmetrize(l)).expect("eigenbasis factor is a conjugation"),
    )
}

fn symmetrize(m: CMatrix) -> CMatrix {
    (&m + m.transpose()).scale(0.5)
}

/// `‖K∘L − U₀‖_F`, with `K∘L` the linear map `K_m conj(L_m)`.
pub fn factor_residual(u0: &UnitaryOperator, k: &Conjugation, l: &Conjugation) -> f64 {
    (k.compose(l) - u0.matrix()).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::conjugation::symmetry_residual;
    use crate::linalg::matrix::{c64, identity, CVector, IMAG, ONE};
    use crate::linalg::unitary::unitarity_residual;
    use crate::random::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unitary(m: CMatrix) -> UnitaryOperator {
        UnitaryOperator::new(m).unwrap()
    }

    #[test]
    fn minus_one() {
        let u = unitary(CMatrix::from_element(1, 1, -ONE));
        let (k, l) = godic_lucenko_factor(&u);
        assert!((l.matrix()[(0, 0)] - ONE).norm() < 1e-15);
        assert!((k.matrix()[(0, 0)] + ONE).norm() < 1e-15);
        let x = CVector::from_element(1, c64(0.3, 0.7));
        assert!((k.apply(&l.apply(&x)) + &x).norm() < 1e-15);
    }

    #[test]
    fn identity_gives_plain_conjugation() {
        let (k, l) = godic_lucenko_factor(&UnitaryOperator::identity(3));
        assert!((k.matrix() - identity(3)).norm() < 1e-14);
        assert!((l.matrix() - identity(3)).norm() < 1e-14);
    }

    #[test]
    fn diagonal_phases() {
        let u = unitary(diag(&[IMAG, -IMAG]));
        let (k, l) = godic_lucenko_factor(&u);
        assert!((l.matrix() - identity(2)).norm() < 1e-14);
        assert!((k.matrix() - diag(&[IMAG, -IMAG])).norm() < 1e-14);
        assert!(factor_residual(&u, &k, &l) < 1e-14);
    }

    #[test]
    fn random_unitaries_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [1, 2, 5, 9] {
            let u = haar_unitary(&mut rng, n);
            let (k, l) = godic_lucenko_factor(&u);
            assert!(factor_residual(&u, &k, &l) < 1e-10);
            for c in [&k, &l] {
                assert!(symmetry_residual(c.matrix()) < 1e-10);
                assert!(unitarity_residual(c.matrix()) < 1e-10);
                assert!(c.involution_residual() < 1e-10);
            }
        }
    }
}
