use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::json;
use crate::linalg::matrix::{commutator_norm, CMatrix, ExtPoint, C64};
use crate::linalg::unitary::cayley_apply;
use crate::linalg::{EmbeddedSpace, UnitaryOperator};
use crate::tol;

/// A two-variable family `(z₁, z₂) ↦ R_{z₁,z₂}` of `dim × dim` matrices on `𝕋_e × 𝕋_e`.
pub trait PairSampler: Sync {
    fn dim(&self) -> usize;

    /// Value at finite arguments off the unit circle.
    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix>;

    /// Value at arguments that may be `∞`, when the sampler knows it exactly.
    /// `None` means the value must be obtained as a limit.
    fn eval_exact(&self, _z1: ExtPoint, _z2: ExtPoint) -> Option<Result<CMatrix>> {
        None
    }
}

impl<T: PairSampler + ?Sized> PairSampler for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        (**self).eval(z1, z2)
    }
    fn eval_exact(&self, z1: ExtPoint, z2: ExtPoint) -> Option<Result<CMatrix>> {
        (**self).eval_exact(z1, z2)
    }
}

/// Two commuting unitaries on `H̃` together with the embedding of `H`.
#[derive(Clone, Debug)]
pub struct CommutingUnitaryPair {
    space: EmbeddedSpace,
    u1: UnitaryOperator,
    u2: UnitaryOperator,
}

impl CommutingUnitaryPair {
    pub fn new(space: EmbeddedSpace, u1: UnitaryOperator, u2: UnitaryOperator) -> Result<Self> {
        if u1.dim() != space.big_dim() || u2.dim() != space.big_dim() {
            return Err(Error::Shape(format!(
                "unitaries of sizes {} and {} on a space of dimension {}",
                u1.dim(),
                u2.dim(),
                space.big_dim()
            )));
        }
        let c = commutator_norm(u1.matrix(), u2.matrix());
        if c > tol::COMMUTE {
            return Err(Error::NotCommuting(c));
        }
        Ok(Self { space, u1, u2 })
    }

    pub fn space(&self) -> &EmbeddedSpace {
        &self.space
    }

    pub fn u1(&self) -> &UnitaryOperator {
        &self.u1
    }

    pub fn u2(&self) -> &UnitaryOperator {
        &self.u2
    }

    pub fn small_dim(&self) -> usize {
        self.space.small_dim()
    }

    pub fn big_dim(&self) -> usize {
        self.space.big_dim()
    }

    pub fn commutator(&self) -> f64 {
        commutator_norm(self.u1.matrix(), self.u2.matrix())
    }
}

/// `ιᴴ U₁(z₁) U₂(z₂) ι`, with `U(∞) = −I`.
pub fn pair_resolvent(pair: &CommutingUnitaryPair, z1: impl Into<ExtPoint>, z2: impl Into<ExtPoint>) -> Result<CMatrix> {
    let iota = pair.space.embedding();
    let inner = cayley_apply(&pair.u2, z2.into(), iota)?;
    let outer = cayley_apply(&pair.u1, z1.into(), &inner)?;
    Ok(iota.adjoint() * outer)
}

impl PairSampler for CommutingUnitaryPair {
    fn dim(&self) -> usize {
        self.small_dim()
    }

    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        pair_resolvent(self, z1, z2)
    }

    fn eval_exact(&self, z1: ExtPoint, z2: ExtPoint) -> Option<Result<CMatrix>> {
        Some(pair_resolvent(self, z1, z2))
    }
}

#[derive(Serialize, Deserialize)]
struct Raw {
    small_dim: usize,
    big_dim: usize,
    #[serde(with = "json::matrix")]
    embedding: CMatrix,
    #[serde(rename = "U1", with = "json::matrix")]
    u1: CMatrix,
    #[serde(rename = "U2", with = "json::matrix")]
    u2: CMatrix,
}

impl Serialize for CommutingUnitaryPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Raw {
            small_dim: self.small_dim(),
            big_dim: self.big_dim(),
            embedding: self.space.embedding().clone(),
            u1: self.u1.matrix().clone(),
            u2: self.u2.matrix().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CommutingUnitaryPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Raw::deserialize(d)?;
        let e = json::fit_shape(raw.embedding, raw.big_dim, raw.small_dim).map_err(D::Error::custom)?;
        let space = EmbeddedSpace::new(e).map_err(D::Error::custom)?;
        let u1 = UnitaryOperator::new(raw.u1).map_err(D::Error::custom)?;
        let u2 = UnitaryOperator::new(raw.u2).map_err(D::Error::custom)?;
        CommutingUnitaryPair::new(space, u1, u2).map_err(D::Error::custom)
    }
}

/// Wraps a closure of two finite arguments as a sampler.
pub struct FnPair<F> {
    dim: usize,
    f: F,
}

impl<F> FnPair<F>
where
    F: Fn(C64, C64) -> Result<CMatrix> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> PairSampler for FnPair<F>
where
    F: Fn(C64, C64) -> Result<CMatrix> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        (self.f)(z1, z2)
    }
}

/// A scalar function of two variables viewed as a `1 × 1` sampler.
pub fn scalar_pair<F>(f: F) -> FnPair<impl Fn(C64, C64) -> Result<CMatrix> + Sync>
where
    F: Fn(C64, C64) -> C64 + Sync,
{
    FnPair::new(1, move |a, b| Ok(CMatrix::from_element(1, 1, f(a, b))))
}

fn point_key(z: ExtPoint) -> Option<(u64, u64)> {
    z.finite().map(|z| ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits()))
}

/// Resolvent values known only at a finite set of points.
#[derive(Clone, Debug, Default)]
pub struct TabulatedPairSampler {
    dim: usize,
    values: HashMap<(Option<(u64, u64)>, Option<(u64, u64)>), CMatrix>,
}

/// One tabulated value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairSample {
    /// `None` encodes the point at infinity.
    #[serde(with = "ext_point")]
    pub z1: ExtPoint,
    #[serde(with = "ext_point")]
    pub z2: ExtPoint,
    #[serde(with = "json::matrix")]
    pub value: CMatrix,
}

mod ext_point {
    use super::*;

    pub fn serialize<S: Serializer>(z: &ExtPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
        z.finite().map(json::complex_to_pair).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ExtPoint, D::Error> {
        Ok(match Option::<[f64; 2]>::deserialize(d)? {
            Some([re, im]) => ExtPoint::Finite(C64::new(re, im)),
            None => ExtPoint::Infinity,
        })
    }
}

impl TabulatedPairSampler {
    pub fn new(dim: usize, samples: Vec<PairSample>) -> Result<Self> {
        let mut values = HashMap::with_capacity(samples.len());
        for s in samples {
            if s.value.shape() != (dim, dim) {
                return Err(Error::Shape(format!(
                    "tabulated value is {}x{}, expected {dim}x{dim}",
                    s.value.nrows(),
                    s.value.ncols()
                )));
            }
            values.insert((point_key(s.z1), point_key(s.z2)), s.value);
        }
        Ok(Self { dim, values })
    }

    /// Tabulates `source` at every pair of the given points.
    pub fn tabulate<S: PairSampler>(source: &S, points: &[ExtPoint]) -> Result<Self> {
        let mut samples = Vec::with_capacity(points.len() * points.len());
        for &a in points {
            for &b in points {
                let value = super::limits::extended_eval(source, a, b)?;
                samples.push(PairSample { z1: a, z2: b, value });
            }
        }
        Self::new(source.dim(), samples)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn lookup(&self, z1: ExtPoint, z2: ExtPoint) -> Option<&CMatrix> {
        self.values.get(&(point_key(z1), point_key(z2)))
    }

    pub fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self {
            dim: self.dim,
            values: self.values.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }
}

impl PairSampler for TabulatedPairSampler {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z1: C64, z2: C64) -> Result<CMatrix> {
        self.lookup(z1.into(), z2.into())
            .cloned()
            .ok_or_else(|| Error::Shape(format!("no tabulated value at ({z1}, {z2})")))
    }

    fn eval_exact(&self, z1: ExtPoint, z2: ExtPoint) -> Option<Result<CMatrix>> {
        Some(self.lookup(z1, z2).cloned().ok_or_else(|| {
            Error::Shape(format!("no tabulated value at ({z1:?}, {z2:?})"))
        }))
    }
}
