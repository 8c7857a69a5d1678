//! Seeded generators for test instances.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::iso::DefectConjugationFrame;
use crate::linalg::matrix::{c64, diag, hermitian_eigen, normal_eigen, spectral_norm, CMatrix, CVector, C64, ZERO};
use crate::linalg::subspace::Subspace;
use crate::linalg::{Conjugation, EmbeddedSpace, UnitaryOperator};
use crate::moments::{grid_angle, GridOperatorMeasure, GridScalarMeasure};
use crate::pair::CommutingUnitaryPair;
use crate::single::{PartialIsometry, SchurParameter};

/// Matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im) / 2f64.sqrt()
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitaryOperator {
    if n == 0 {
        return UnitaryOperator::identity(0);
    }
    let qr = ginibre(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOperator::new(q).expect("QR factor is unitary")
}

/// Haar orthogonal matrix with real entries.
pub fn real_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let (mut q, r) = g.qr().unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q.map(|x| c64(x, 0.0))
}

/// `big × small` matrix with orthonormal columns.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, big: usize, small: usize) -> CMatrix {
    haar_unitary(rng, big).matrix().columns(0, small).into_owned()
}

/// Angle drawn uniformly from `(0, 2π]`.
pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    std::f64::consts::TAU * (1.0 - rng.random::<f64>())
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, random_angle(rng))
}

/// A random `rows × cols` matrix with spectral norm drawn from `[0, max_norm]`.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, max_norm: f64) -> CMatrix {
    let g = ginibre(rng, rows, cols);
    let s = spectral_norm(&g);
    if s == 0.0 {
        return g;
    }
    g * c64(max_norm * rng.random::<f64>() / s, 0.0)
}

/// Partial isometry on `ℂⁿ` with a random domain of dimension `d`.
pub fn random_partial_isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> PartialIsometry {
    let domain = Subspace::from_orthonormal(random_isometry(rng, n, d)).expect("orthonormal columns");
    let action = random_isometry(rng, n, d);
    PartialIsometry::new(domain, action).expect("isometric action")
}

/// A constant Schur parameter `N₀(V) → N_∞(V)` given by a random unitary
/// (when the defects have equal dimension) or a random strict contraction.
pub fn random_constant_parameter<R: Rng + ?Sized>(rng: &mut R, v: &PartialIsometry) -> Result<SchurParameter> {
    let (n0, ninf) = (v.defect_domain(), v.defect_range());
    let c = if n0.rank() == ninf.rank() {
        haar_unitary(rng, n0.rank()).into_matrix()
    } else {
        random_contraction(rng, ninf.rank(), n0.rank(), 1.0)
    };
    SchurParameter::constant(c, n0, ninf)
}

/// A constant `Ψ = W diag(c) Wᴴ` on the defect domain of a frame, where
/// `U₀ = W D Wᴴ` and `|cᵢ| ≤ max_norm`. It commutes with `U₀`.
pub fn random_commutant_parameter<R: Rng + ?Sized>(
    rng: &mut R,
    frame: &DefectConjugationFrame,
    max_norm: f64,
) -> Result<SchurParameter> {
    let (_, w) = normal_eigen(frame.u0().matrix());
    let c: Vec<C64> = (0..w.ncols())
        .map(|_| C64::from_polar(max_norm * rng.random::<f64>(), random_angle(rng)))
        .collect();
    let n0 = frame.defect_domain().clone();
    SchurParameter::constant(&w * diag(&c) * w.adjoint(), n0.clone(), n0)
}

/// Commuting unitaries on `ℂ^big_dim` of the form `W diag(e^{iθ}) Wᴴ` with a
/// common Haar `W` and joint eigenangles drawn from the `grid_n × grid_n` grid,
/// together with a random embedding of `ℂ^dim`.
pub fn random_grid_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize, big_dim: usize, grid_n: usize) -> CommutingUnitaryPair {
    random_grid_pair_with(rng, dim, big_dim, grid_n, grid_n)
}

pub fn random_grid_pair_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    big_dim: usize,
    n1: usize,
    n2: usize,
) -> CommutingUnitaryPair {
    let w = haar_unitary(rng, big_dim).into_matrix();
    let mut p1 = Vec::with_capacity(big_dim);
    let mut p2 = Vec::with_capacity(big_dim);
    for _ in 0..big_dim {
        p1.push(C64::from_polar(1.0, grid_angle(rng.random_range(1..=n1), n1)));
        p2.push(C64::from_polar(1.0, grid_angle(rng.random_range(1..=n2), n2)));
    }
    let u1 = &w * diag(&p1) * w.adjoint();
    let u2 = &w * diag(&p2) * w.adjoint();
    let space = EmbeddedSpace::new(random_isometry(rng, big_dim, dim)).expect("isometric embedding");
    CommutingUnitaryPair::new(
        space,
        UnitaryOperator::new(u1).expect("unitary"),
        UnitaryOperator::new(u2).expect("unitary"),
    )
    .expect("common eigenbasis")
}

/// Commuting unitaries with joint eigenangles drawn uniformly from the torus.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize, big_dim: usize) -> CommutingUnitaryPair {
    let w = haar_unitary(rng, big_dim).into_matrix();
    let p1: Vec<C64> = (0..big_dim).map(|_| random_phase(rng)).collect();
    let p2: Vec<C64> = (0..big_dim).map(|_| random_phase(rng)).collect();
    let u1 = &w * diag(&p1) * w.adjoint();
    let u2 = &w * diag(&p2) * w.adjoint();
    let space = EmbeddedSpace::new(random_isometry(rng, big_dim, dim)).expect("isometric embedding");
    CommutingUnitaryPair::new(
        space,
        UnitaryOperator::new(u1).expect("unitary"),
        UnitaryOperator::new(u2).expect("unitary"),
    )
    .expect("common eigenbasis")
}

/// Complex weights on a grid, independent standard Gaussians.
pub fn random_scalar_measure<R: Rng + ?Sized>(rng: &mut R, n1: usize, n2: usize) -> GridScalarMeasure {
    let w = ginibre(rng, n1 * n2, 1);
    GridScalarMeasure::new(n1, n2, w.iter().copied().collect()).expect("sized weights")
}

/// A normalized positive operator measure supported on `support` random cells:
/// random PSD blocks `GGᴴ` rescaled by `S^{-1/2}` on both sides, `S = Σ GGᴴ`.
pub fn random_operator_measure<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n1: usize,
    n2: usize,
    support: usize,
) -> GridOperatorMeasure {
    let cells = n1 * n2;
    let mut order: Vec<usize> = (0..cells).collect();
    order.shuffle(rng);
    let support = support.clamp(1, cells);
    let mut raw = vec![CMatrix::zeros(dim, dim); cells];
    for &c in &order[..support] {
        let rank = rng.random_range(1..=dim.max(1));
        let g = ginibre(rng, dim, rank);
        raw[c] = &g * g.adjoint();
    }
    let mut s = CMatrix::zeros(dim, dim);
    for a in &raw {
        s += a;
    }
    // A support smaller than the dimension can leave S singular; pad the first cell.
    let (values, vectors) = hermitian_eigen(&s);
    if values.first().is_some_and(|&v| v < 1e-3) {
        raw[order[0]] += &vectors * diag(&values.iter().map(|&v| c64((1.0 - v).max(0.0), 0.0)).collect::<Vec<_>>()) * vectors.adjoint();
        s = raw.iter().fold(CMatrix::zeros(dim, dim), |acc, a| acc + a);
    }
    let (values, vectors) = hermitian_eigen(&s);
    let inv_root: Vec<C64> = values.iter().map(|&v| c64(1.0 / v.sqrt(), 0.0)).collect();
    let t = &vectors * diag(&inv_root) * vectors.adjoint();
    let atoms: Vec<CMatrix> = raw
        .iter()
        .map(|a| {
            let b = &t * a * &t;
            (&b + b.adjoint()).scale(0.5)
        })
        .collect();
    GridOperatorMeasure::new(n1, n2, dim, atoms).expect("normalized PSD atoms")
}

/// An isometric operator `V`, a unitary `U` and a conjugation `J` with
/// `VU = UV` on `D(V)`, `U D(V) = D(V)`, `UJ = JU⁻¹` and `J D(V) = R(V)`.
#[derive(Clone, Debug)]
pub struct IsoUnitaryInstance {
    pub v: PartialIsometry,
    pub u: UnitaryOperator,
    pub j: Conjugation,
}

/// Builds an instance on `ℂⁿ`. `U` is symmetric in a real orthogonal basis
/// `o₁, …, oₙ` and has two-dimensional eigenspaces `span{o₂ₚ₋₁, o₂ₚ}`; `D(V)`
/// contains `(o₂ₚ₋₁ + i o₂ₚ)/√2` for some of them, mapped to multiples of
/// `(o₂ₚ₋₁ − i o₂ₚ)/√2`, and some single eigenvectors mapped to phase multiples
/// of themselves. A Haar unitary `W` then moves everything, with `J = W Wᵀ ∘ conj`.
pub fn random_iso_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> IsoUnitaryInstance {
    let o = real_orthogonal(rng, n);
    let pairs = n / 2;
    let mut eig = vec![ZERO; n];
    for p in 0..pairs {
        let lambda = random_phase(rng);
        eig[2 * p] = lambda;
        eig[2 * p + 1] = lambda;
    }
    if n % 2 == 1 {
        eig[n - 1] = random_phase(rng);
    }
    let s = 1.0 / 2f64.sqrt();
    let mut dom: Vec<CVector> = Vec::new();
    let mut img: Vec<CVector> = Vec::new();
    for p in 0..pairs {
        let (a, b) = (o.column(2 * p).into_owned(), o.column(2 * p + 1).into_owned());
        match rng.random_range(0..3) {
            0 => {
                let phase = random_phase(rng);
                dom.push((&a + &b * c64(0.0, 1.0)) * c64(s, 0.0));
                img.push((&a - &b * c64(0.0, 1.0)) * (phase * s));
            }
            1 => {
                dom.push(a.clone());
                img.push(a * random_phase(rng));
            }
            _ => {}
        }
    }
    if n % 2 == 1 && rng.random_bool(0.5) {
        let a = o.column(n - 1).into_owned();
        dom.push(a.clone());
        img.push(a * random_phase(rng));
    }
    let w = haar_unitary(rng, n).into_matrix();
    let d = dom.len();
    let mut domain = CMatrix::zeros(n, d);
    let mut action = CMatrix::zeros(n, d);
    for c in 0..d {
        domain.set_column(c, &(&w * &dom[c]));
        action.set_column(c, &(&w * &img[c]));
    }
    let u = &w * &o * diag(&eig) * o.transpose() * w.adjoint();
    let j = &w * w.transpose();
    IsoUnitaryInstance {
        v: PartialIsometry::new(Subspace::from_orthonormal(domain).expect("orthonormal"), action)
            .expect("isometric action"),
        u: UnitaryOperator::new(u).expect("unitary"),
        j: Conjugation::new((&j + j.transpose()).scale(0.5)).expect("symmetric unitary"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::identity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary_and_seeded() {
        let a = haar_unitary(&mut ChaCha8Rng::seed_from_u64(3), 5);
        let b = haar_unitary(&mut ChaCha8Rng::seed_from_u64(3), 5);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn operator_measure_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for support in [1, 2, 5] {
            let m = random_operator_measure(&mut rng, 3, 4, 2, support);
            assert!(m.normalization_residual() < 1e-12);
        }
    }

    #[test]
    fn iso_unitary_frame_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..7 {
            let inst = random_iso_unitary(&mut rng, n);
            let (u, jm) = (inst.u.matrix(), inst.j.matrix());
            // U J = J U⁻¹ reads U M = M Uᵀ.
            assert!((u * jm - jm * u.transpose()).norm() < 1e-12);
            let vop = inst.v.operator();
            let dom = inst.v.domain().basis();
            assert!(((&vop * u - u * &vop) * dom).norm() < 1e-12);
            assert!(inst.v.domain().containment_residual(&(u * dom)) < 1e-12);
            let jd = inst.j.apply_columns(dom);
            assert!(inst.v.range().containment_residual(&jd) < 1e-12);
            assert!((u.adjoint() * u - identity(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn commutant_parameter_commutes() {
        use crate::iso::{build_theta, commutant_residual, psi_to_phi, IsoUnitaryPair};
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let grid = crate::SampleGrid::with_angles(4).unwrap();
        for n in 2..7 {
            let inst = random_iso_unitary(&mut rng, n);
            let pair = IsoUnitaryPair::new(inst.v, inst.u).unwrap();
            let frame = build_theta(&pair, &inst.j).unwrap();
            let psi = random_commutant_parameter(&mut rng, &frame, 0.9).unwrap();
            assert!(psi.max_norm() <= 0.9 + 1e-12);
            assert!(commutant_residual(&frame, &psi, &grid).unwrap() < 1e-12);
            psi_to_phi(&frame, &psi, &grid).unwrap();
        }
    }
}
