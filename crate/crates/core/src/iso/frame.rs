use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::linalg::json;
use crate::linalg::matrix::{CMatrix, C64};
use crate::linalg::subspace::Subspace;
use crate::linalg::unitary::unitarity_residual;
use crate::linalg::{Conjugation, UnitaryOperator};
use crate::single::SchurParameter;
use crate::tol;

use super::godic::{factor_residual, godic_lucenko_factor};
use super::pair::{svu_membership, IsoUnitaryPair};

/// A conjugation `J` adapted to an isometry–unitary pair, together with the
/// factorization `U₀ = K∘L` of the restriction of `U` to `N₀ = H ⊖ D(V)` and
/// the linear map `Θ = J∘K : N₀ → N_∞`.
///
/// `K`, `L`, `U₀` are stored in coordinates of the orthonormal basis of `N₀`
/// and `Θ` as a `dim N_∞ × dim N₀` matrix in the bases of `N₀` and `N_∞`.
#[derive(Clone, Debug)]
pub struct DefectConjugationFrame {
    pair: IsoUnitaryPair,
    j: Conjugation,
    n0: Subspace,
    ninf: Subspace,
    u0: UnitaryOperator,
    k: Conjugation,
    l: Conjugation,
    theta: CMatrix,
    theta_inv: CMatrix,
}

impl DefectConjugationFrame {
    pub fn pair(&self) -> &IsoUnitaryPair {
        &self.pair
    }

    pub fn j(&self) -> &Conjugation {
        &self.j
    }

    pub fn defect_domain(&self) -> &Subspace {
        &self.n0
    }

    pub fn defect_range(&self) -> &Subspace {
        &self.ninf
    }

    pub fn u0(&self) -> &UnitaryOperator {
        &self.u0
    }

    pub fn k(&self) -> &Conjugation {
        &self.k
    }

    pub fn l(&self) -> &Conjugation {
        &self.l
    }

    pub fn theta(&self) -> &CMatrix {
        &self.theta
    }

    pub fn theta_inverse(&self) -> &CMatrix {
        &self.theta_inv
    }

    /// `‖K∘L − U₀‖_F`.
    pub fn factor_residual(&self) -> f64 {
        factor_residual(&self.u0, &self.k, &self.l)
    }

    /// `‖Θ U₀ − U_∞ Θ‖_F` with `U_∞` the restriction of `U` to `N_∞`.
    pub fn intertwining_residual(&self) -> f64 {
        let u = self.pair.u().matrix();
        let u_inf = self.ninf.basis().adjoint() * u * self.ninf.basis();
        (&self.theta * self.u0.matrix() - u_inf * &self.theta).norm()
    }

    /// `max(‖Θ⁻¹Θ − I‖, ‖ΘΘ⁻¹ − I‖)`.
    pub fn inverse_residual(&self) -> f64 {
        let a = &self.theta_inv * &self.theta - CMatrix::identity(self.n0.rank(), self.n0.rank());
        let b = &self.theta * &self.theta_inv - CMatrix::identity(self.ninf.rank(), self.ninf.rank());
        a.norm().max(b.norm())
    }
}

/// `‖U M − M Uᵀ‖_F`, the matrix form of `UJ = JU⁻¹` for `J = M ∘ conj`.
pub fn reflection_residual(u: &UnitaryOperator, j: &Conjugation) -> f64 {
    (u.matrix() * j.matrix() - j.matrix() * u.matrix().transpose()).norm()
}

/// Checks `UJ = JU⁻¹`, `J D(V) = R(V)` and `J N₀ = N_∞`, factors the
/// restriction `U₀` of `U` to `N₀` and builds `Θ = J∘K`.
pub fn build_theta(pair: &IsoUnitaryPair, j: &Conjugation) -> Result<DefectConjugationFrame> {
    let n = pair.dim();
    if j.dim() != n {
        return Err(Error::FrameMismatch(format!("conjugation on dimension {}, pair on {n}", j.dim())));
    }
    let refl = reflection_residual(pair.u(), j);
    if refl > tol::ORTHO {
        return Err(Error::FrameMismatch(format!("UJ = JU⁻¹ fails (residual {refl:.3e})")));
    }
    let v = pair.v();
    let range = v.range();
    let into_range = range.containment_residual(&j.apply_columns(v.domain().basis()));
    if into_range > tol::ORTHO || range.rank() != v.domain().rank() {
        return Err(Error::FrameMismatch(format!("J D(V) ≠ R(V) (residual {into_range:.3e})")));
    }
    let (n0, ninf) = (v.defect_domain(), v.defect_range());
    let into_ninf = ninf.containment_residual(&j.apply_columns(n0.basis()));
    if into_ninf > tol::ORTHO {
        return Err(Error::FrameMismatch(format!("J N₀ ≠ N_∞ (residual {into_ninf:.3e})")));
    }
    let b0 = n0.basis();
    let u0m = b0.adjoint() * pair.u().matrix() * b0;
    let u0_res = unitarity_residual(&u0m);
    if u0_res > tol::ORTHO {
        return Err(Error::FrameMismatch(format!(
            "U does not leave N₀ invariant (unitarity residual {u0_res:.3e})"
        )));
    }
    let u0 = UnitaryOperator::new(u0m)?;
    let (k, l) = godic_lucenko_factor(&u0);
    let binf = ninf.basis();
    let m = j.matrix();
    // Θx = M conj(B₀ K conj(B₀ᴴx)) = M B̄₀ K̄ B₀ᴴ x; Θ⁻¹ = K∘J likewise.
    let theta = binf.adjoint() * m * b0.conjugate() * k.matrix().conjugate();
    let theta_inv = k.matrix() * b0.transpose() * m.conjugate() * binf;
    Ok(DefectConjugationFrame {
        pair: pair.clone(),
        j: j.clone(),
        n0,
        ninf,
        u0,
        k,
        l,
        theta,
        theta_inv,
    })
}

/// Coordinates of the coefficients of a parameter in the bases of `src` and `dst`.
fn coefficients_in(p: &SchurParameter, src: &Subspace, dst: &Subspace) -> Result<Vec<CMatrix>> {
    let (ds, dt) = (p.source().projector_distance(src), p.target().projector_distance(dst));
    if ds > tol::ORTHO.sqrt() || dt > tol::ORTHO.sqrt() {
        return Err(Error::Shape(format!(
            "parameter bases do not match the frame (distances {ds:.3e}, {dt:.3e})"
        )));
    }
    let left = dst.basis().adjoint() * p.target().basis();
    let right = p.source().basis().adjoint() * src.basis();
    Ok(p.coefficients().iter().map(|c| &left * c * &right).collect())
}

/// `max_z ‖Ψ_z U₀ − U₀ Ψ_z‖_F` over `0` and the interior grid points.
pub fn commutant_residual(frame: &DefectConjugationFrame, psi: &SchurParameter, grid: &SampleGrid) -> Result<f64> {
    let coeffs = coefficients_in(psi, &frame.n0, &frame.n0)?;
    let local = SchurParameter::unchecked(coeffs, frame.n0.clone(), frame.n0.clone())?;
    let u0 = frame.u0.matrix();
    let mut pts = vec![C64::new(0.0, 0.0)];
    pts.extend(grid.interior());
    Ok(pts
        .par_iter()
        .map(|&z| {
            let p = local.eval(z);
            (&p * u0 - u0 * &p).norm()
        })
        .reduce(|| 0.0, f64::max))
}

/// `Φ_z = ΘΨ_z` for `Ψ` commuting with `U₀`.
pub fn psi_to_phi(frame: &DefectConjugationFrame, psi: &SchurParameter, grid: &SampleGrid) -> Result<SchurParameter> {
    let r = commutant_residual(frame, psi, grid)?;
    if r > tol::SVU {
        return Err(Error::CommutantViolation(r));
    }
    let coeffs = coefficients_in(psi, &frame.n0, &frame.n0)?
        .iter()
        .map(|c| &frame.theta * c)
        .collect();
    let phi = SchurParameter::new(coeffs, frame.n0.clone(), frame.ninf.clone())?;
    svu_membership(&frame.pair, &phi, grid)?;
    Ok(phi)
}

/// `Ψ_z = Θ⁻¹Φ_z` for `Φ` in the commuting class.
pub fn phi_to_psi(frame: &DefectConjugationFrame, phi: &SchurParameter, grid: &SampleGrid) -> Result<SchurParameter> {
    svu_membership(&frame.pair, phi, grid)?;
    let coeffs = coefficients_in(phi, &frame.n0, &frame.ninf)?
        .iter()
        .map(|c| &frame.theta_inv * c)
        .collect();
    SchurParameter::new(coeffs, frame.n0.clone(), frame.n0.clone())
}

impl Serialize for DefectConjugationFrame {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DefectConjugationFrame", 8)?;
        st.serialize_field("J", &self.j)?;
        st.serialize_field("U", self.pair.u())?;
        st.serialize_field("V", self.pair.v())?;
        st.serialize_field("defect_domain_basis", &json::matrix_to_rows(self.n0.basis()))?;
        st.serialize_field("defect_range_basis", &json::matrix_to_rows(self.ninf.basis()))?;
        st.serialize_field("K", &self.k)?;
        st.serialize_field("L", &self.l)?;
        st.serialize_field("Theta", &json::matrix_to_rows(&self.theta))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{basis_vector, c64, from_rows, identity, ONE, ZERO};
    use crate::random::{haar_unitary, random_iso_unitary};
    use crate::single::PartialIsometry;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_scalar_frame() {
        let pair = IsoUnitaryPair::new(PartialIsometry::trivial(1), UnitaryOperator::identity(1)).unwrap();
        let f = build_theta(&pair, &Conjugation::standard(1)).unwrap();
        assert!((f.theta() - identity(1)).norm() < 1e-15);
    }

    #[test]
    fn swap_frame_maps_e2_to_e1() {
        let dom = Subspace::from_orthonormal(CMatrix::from_columns(&[basis_vector(2, 0)])).unwrap();
        let v = PartialIsometry::new(dom, CMatrix::from_columns(&[basis_vector(2, 1)])).unwrap();
        let pair = IsoUnitaryPair::new(v, UnitaryOperator::identity(2)).unwrap();
        let j = Conjugation::new(from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])).unwrap();
        let f = build_theta(&pair, &j).unwrap();
        // Θ e₂ in ambient coordinates.
        let image = f.defect_range().basis() * &f.theta * f.defect_domain().basis().adjoint() * basis_vector(2, 1);
        assert!((image.norm() - 1.0).abs() < 1e-14);
        assert!(image[1].norm() < 1e-14);
        assert!(f.inverse_residual() < 1e-14);
    }

    #[test]
    fn frame_mismatch_detected() {
        let pair = IsoUnitaryPair::new(
            PartialIsometry::trivial(2),
            UnitaryOperator::new(from_rows(&[&[ZERO, ONE], &[-ONE, ZERO]])).unwrap(),
        )
        .unwrap();
        // U is not symmetric, so UJ = JU⁻¹ fails for plain conjugation.
        assert!(matches!(
            build_theta(&pair, &Conjugation::standard(2)),
            Err(Error::FrameMismatch(_))
        ));
    }

    #[test]
    fn random_frames_and_bijection() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let grid = SampleGrid::with_angles(4).unwrap();
        for n in [2, 3, 5, 6] {
            let inst = random_iso_unitary(&mut rng, n);
            let pair = IsoUnitaryPair::new(inst.v, inst.u).unwrap();
            let f = build_theta(&pair, &inst.j).unwrap();
            assert!(f.factor_residual() < 1e-10);
            assert!(f.intertwining_residual() < 1e-10);
            assert!(f.inverse_residual() < 1e-10);

            let d0 = f.defect_domain().rank();
            let (vals, w) = crate::linalg::matrix::normal_eigen(f.u0().matrix());
            let _ = vals;
            let scal: Vec<C64> = (0..d0).map(|_| haar_unitary(&mut rng, 1).matrix()[(0, 0)] * c64(0.8, 0.0)).collect();
            let psi_m = &w * crate::linalg::matrix::diag(&scal) * w.adjoint();
            let psi = SchurParameter::constant(psi_m, f.defect_domain().clone(), f.defect_domain().clone()).unwrap();
            let phi = psi_to_phi(&f, &psi, &grid).unwrap();
            let back = phi_to_psi(&f, &phi, &grid).unwrap();
            assert!(back.coefficient_distance(&psi) < 1e-12);
        }
    }
}
