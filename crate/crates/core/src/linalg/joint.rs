use super::matrix::{commutator_norm, normal_eigen, unit_angle, CMatrix, C64};
use super::unitary::UnitaryOperator;
use crate::error::{Error, Result};
use crate::tol;

/// One joint eigenspace of a commuting unitary pair.
#[derive(Clone, Debug)]
pub struct JointAtom {
    pub theta1: f64,
    pub theta2: f64,
    pub projector: CMatrix,
}

/// Groups indices whose values lie within `gap` of each other (single linkage).
fn cluster(values: &[C64], gap: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() < gap {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn columns(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), idx.len(), |r, c| m[(r, idx[c])])
}

/// Mean eigenvalue of `u` on the range of the orthonormal basis `q`.
fn mean_phase(u: &CMatrix, q: &CMatrix) -> f64 {
    let t = (q.adjoint() * u * q).trace() / q.ncols() as f64;
    unit_angle(t)
}

/// Simultaneous spectral decomposition of two commuting unitaries.
///
/// `U₁` is diagonalized first; the compression of `U₂` to each eigenspace of
/// `U₁` is diagonalized next. Eigenvalues closer than the clustering gap are
/// treated as equal. Atoms are sorted by `(θ₁, θ₂)` with angles in `(0, 2π]`.
pub fn joint_eigendecomposition(u1: &UnitaryOperator, u2: &UnitaryOperator) -> Result<Vec<JointAtom>> {
    if u1.dim() != u2.dim() {
        return Err(Error::Shape(format!(
            "unitaries of sizes {} and {}",
            u1.dim(),
            u2.dim()
        )));
    }
    let comm = commutator_norm(u1.matrix(), u2.matrix());
    if comm > tol::COMMUTE {
        return Err(Error::NotCommuting(comm));
    }
    let (values, q) = normal_eigen(u1.matrix());
    let mut atoms = Vec::new();
    for group in cluster(&values, tol::CLUSTER) {
        let qc = columns(&q, &group);
        let compressed = qc.adjoint() * u2.matrix() * &qc;
        let (inner_values, y) = normal_eigen(&compressed);
        for inner in cluster(&inner_values, tol::CLUSTER) {
            let basis = &qc * columns(&y, &inner);
            atoms.push(JointAtom {
                theta1: mean_phase(u1.matrix(), &basis),
                theta2: mean_phase(u2.matrix(), &basis),
                projector: &basis * basis.adjoint(),
            });
        }
    }
    atoms.sort_by(|a, b| a.theta1.total_cmp(&b.theta1).then(a.theta2.total_cmp(&b.theta2)));
    Ok(atoms)
}
