use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::linalg::matrix::{max_column_norm, C64};
use crate::linalg::subspace::orthonormalize;
use crate::linalg::UnitaryOperator;
use crate::single::resolvent::check_parameter_frame;
use crate::single::{extension_at, PartialIsometry, SchurParameter};
use crate::tol;

/// An isometric operator `V` and a unitary `U` on the same space with
/// `VUh = UVh` whenever both sides are defined.
#[derive(Clone, Debug, Serialize)]
pub struct IsoUnitaryPair {
    #[serde(rename = "V")]
    v: PartialIsometry,
    #[serde(rename = "U")]
    u: UnitaryOperator,
}

impl IsoUnitaryPair {
    pub fn new(v: PartialIsometry, u: UnitaryOperator) -> Result<Self> {
        if v.dim() != u.dim() {
            return Err(Error::Shape(format!(
                "isometry on dimension {}, unitary on {}",
                v.dim(),
                u.dim()
            )));
        }
        let r = iso_unitary_commutation(&v, &u);
        if r > tol::ORTHO {
            return Err(Error::CommutativityViolated(r));
        }
        Ok(Self { v, u })
    }

    pub fn v(&self) -> &PartialIsometry {
        &self.v
    }

    pub fn u(&self) -> &UnitaryOperator {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }
}

impl<'de> Deserialize<'de> for IsoUnitaryPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "V")]
            v: PartialIsometry,
            #[serde(rename = "U")]
            u: UnitaryOperator,
        }
        let raw = Raw::deserialize(d)?;
        IsoUnitaryPair::new(raw.v, raw.u).map_err(D::Error::custom)
    }
}

/// `max ‖(VU − UV)h‖` over an orthonormal basis of `U⁻¹D(V) ∩ D(V)`.
pub fn iso_unitary_commutation(v: &PartialIsometry, u: &UnitaryOperator) -> f64 {
    let dom = v.domain();
    let pulled = orthonormalize(&(u.matrix().adjoint() * dom.basis()));
    let common = pulled.intersection(dom);
    let vop = v.operator();
    let um = u.matrix();
    max_column_norm(&((&vop * um - um * &vop) * common.basis()))
}

fn disk_points(grid: &SampleGrid) -> Vec<C64> {
    let mut pts = vec![C64::new(0.0, 0.0)];
    pts.extend(grid.interior());
    pts
}

/// `max ‖(V ⊕ Φ_z)U − U(V ⊕ Φ_z)‖_F` over `0` and the interior grid points.
/// Fails with `Shape` when `Φ` does not map `N₀(V)` to `N_∞(V)`.
pub fn check_class_svu(pair: &IsoUnitaryPair, phi: &SchurParameter, grid: &SampleGrid) -> Result<f64> {
    check_parameter_frame(&pair.v, phi)?;
    let um = pair.u.matrix();
    Ok(disk_points(grid)
        .par_iter()
        .map(|&z| {
            let ext = extension_at(&pair.v, phi, z);
            (&ext * um - um * &ext).norm()
        })
        .reduce(|| 0.0, f64::max))
}

/// Membership test: the commutation residual is at most `ε_svu` and `Φ` is
/// contractive on the validation grid. Returns the residual.
pub fn svu_membership(pair: &IsoUnitaryPair, phi: &SchurParameter, grid: &SampleGrid) -> Result<f64> {
    let r = check_class_svu(pair, phi, grid)?;
    if r > tol::SVU {
        return Err(Error::NotInClass(r));
    }
    phi.validate().map_err(|_| Error::NotInClass(phi.max_norm() - 1.0))?;
    Ok(r)
}
