use crate::error::{Error, Result};
use crate::linalg::matrix::{check_off_circle, identity, inverse_checked, mirror, CMatrix, C64};
use crate::linalg::unitary::unitary_resolvent;
use crate::linalg::{EmbeddedSpace, UnitaryOperator};
use crate::tol;

use super::isometry::PartialIsometry;
use super::schur::SchurParameter;

/// A family `ζ ↦ R_ζ` of `dim × dim` matrices on `|ζ| ≠ 1`.
pub trait ResolventSampler: Sync {
    fn dim(&self) -> usize;
    fn resolvent(&self, zeta: C64) -> Result<CMatrix>;
}

impl<T: ResolventSampler + ?Sized> ResolventSampler for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn resolvent(&self, zeta: C64) -> Result<CMatrix> {
        (**self).resolvent(zeta)
    }
}

/// Wraps a closure as a sampler.
pub struct FnSampler<F> {
    dim: usize,
    f: F,
}

impl<F> FnSampler<F>
where
    F: Fn(C64) -> Result<CMatrix> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> ResolventSampler for FnSampler<F>
where
    F: Fn(C64) -> Result<CMatrix> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn resolvent(&self, zeta: C64) -> Result<CMatrix> {
        (self.f)(zeta)
    }
}

pub(crate) fn check_parameter_frame(v: &PartialIsometry, phi: &SchurParameter) -> Result<()> {
    let n0 = v.defect_domain();
    let ninf = v.defect_range();
    let d0 = phi.source().projector_distance(&n0);
    let d1 = phi.target().projector_distance(&ninf);
    if d0 > tol::ORTHO.sqrt() || d1 > tol::ORTHO.sqrt() {
        return Err(Error::Shape(format!(
            "parameter bases do not match the defect subspaces (distances {d0:.3e}, {d1:.3e})"
        )));
    }
    Ok(())
}

/// `V ⊕ Φ_ζ`: `V` on `D(V)`, `Φ(ζ)` on `N₀(V)`.
pub fn extension_at(v: &PartialIsometry, phi: &SchurParameter, zeta: C64) -> CMatrix {
    v.operator() + phi.eval_ambient(zeta)
}

/// `[I − ζ(V ⊕ Φ_ζ)]⁻¹` for `|ζ| < 1`.
pub fn chumakin_resolvent(v: &PartialIsometry, phi: &SchurParameter, zeta: C64) -> Result<CMatrix> {
    if zeta.norm() >= 1.0 {
        return Err(Error::OutsideDisk(zeta));
    }
    check_parameter_frame(v, phi)?;
    chumakin_unchecked(v, phi, zeta)
}

fn chumakin_unchecked(v: &PartialIsometry, phi: &SchurParameter, zeta: C64) -> Result<CMatrix> {
    let bracket = identity(v.dim()) - extension_at(v, phi, zeta) * zeta;
    inverse_checked(&bracket)
}

/// `ιᴴ (I − ζU)⁻¹ ι`.
pub fn resolvent_from_extension(ext: &EmbeddedSpace, u: &UnitaryOperator, zeta: C64) -> Result<CMatrix> {
    if u.dim() != ext.big_dim() {
        return Err(Error::Shape(format!(
            "unitary acts on dimension {}, extension space has {}",
            u.dim(),
            ext.big_dim()
        )));
    }
    check_off_circle(zeta)?;
    Ok(ext.compress(&unitary_resolvent(u, zeta)?))
}

/// The generalized resolvent given by a Schur parameter, on the whole of `𝕋_e`.
/// Outside the disk it is continued by `R_ζ = I − R_{1/ζ̄}ᴴ`.
#[derive(Clone, Debug)]
pub struct ChumakinSampler {
    v: PartialIsometry,
    phi: SchurParameter,
}

impl ChumakinSampler {
    pub fn new(v: PartialIsometry, phi: SchurParameter) -> Result<Self> {
        check_parameter_frame(&v, &phi)?;
        Ok(Self { v, phi })
    }

    pub fn isometry(&self) -> &PartialIsometry {
        &self.v
    }

    pub fn parameter(&self) -> &SchurParameter {
        &self.phi
    }
}

impl ResolventSampler for ChumakinSampler {
    fn dim(&self) -> usize {
        self.v.dim()
    }

    fn resolvent(&self, zeta: C64) -> Result<CMatrix> {
        check_off_circle(zeta)?;
        if zeta.norm() < 1.0 {
            chumakin_unchecked(&self.v, &self.phi, zeta)
        } else {
            let inner = chumakin_unchecked(&self.v, &self.phi, mirror(zeta))?;
            Ok(identity(self.dim()) - inner.adjoint())
        }
    }
}

/// The generalized resolvent of a unitary extension.
#[derive(Clone, Debug)]
pub struct ExtensionSampler {
    pub space: EmbeddedSpace,
    pub unitary: UnitaryOperator,
}

impl ResolventSampler for ExtensionSampler {
    fn dim(&self) -> usize {
        self.space.small_dim()
    }

    fn resolvent(&self, zeta: C64) -> Result<CMatrix> {
        resolvent_from_extension(&self.space, &self.unitary, zeta)
    }
}
