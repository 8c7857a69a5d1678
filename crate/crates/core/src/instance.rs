//! Seeded test instances and their JSON files.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SampleGrid;
use crate::iso::IsoUnitaryPair;
use crate::linalg::matrix::ExtPoint;
use crate::linalg::Conjugation;
use crate::moments::taylor::chart_points;
use crate::moments::{GridOperatorMeasure, TaylorConfig};
use crate::pair::{extended_eval, CommutingUnitaryPair, PairSample, PairSampler, TabulatedPairSampler};
use crate::random;

pub const MAX_BIG_DIM: usize = 256;
pub const GRID_SIZES: [usize; 6] = [2, 4, 8, 16, 32, 64];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    Pair,
    IsoUnitary,
    Measure,
    ResolventSamples,
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pair" => Ok(Self::Pair),
            "iso-unitary" => Ok(Self::IsoUnitary),
            "measure" => Ok(Self::Measure),
            "resolvent-samples" => Ok(Self::ResolventSamples),
            other => Err(Error::InvalidSpec(format!("unknown instance kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    pub big_dim: usize,
    pub grid_n: usize,
    pub kind: InstanceKind,
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidSpec("dim must be positive".into()));
        }
        if self.dim > self.big_dim || self.big_dim > MAX_BIG_DIM {
            return Err(Error::InvalidSpec(format!(
                "need dim <= big_dim <= {MAX_BIG_DIM}, got dim {} and big_dim {}",
                self.dim, self.big_dim
            )));
        }
        if !GRID_SIZES.contains(&self.grid_n) {
            return Err(Error::InvalidSpec(format!(
                "grid_n must be one of {GRID_SIZES:?}, got {}",
                self.grid_n
            )));
        }
        Ok(())
    }
}

/// A generated instance as stored on disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Pair {
        spec: Option<InstanceSpec>,
        pair: CommutingUnitaryPair,
    },
    IsoUnitary {
        spec: Option<InstanceSpec>,
        pair: IsoUnitaryPair,
        #[serde(rename = "J")]
        j: Conjugation,
    },
    Measure {
        spec: Option<InstanceSpec>,
        measure: GridOperatorMeasure,
    },
    ResolventSamples {
        spec: Option<InstanceSpec>,
        dim: usize,
        samples: Vec<PairSample>,
    },
}

impl Instance {
    pub fn spec(&self) -> Option<&InstanceSpec> {
        match self {
            Instance::Pair { spec, .. }
            | Instance::IsoUnitary { spec, .. }
            | Instance::Measure { spec, .. }
            | Instance::ResolventSamples { spec, .. } => spec.as_ref(),
        }
    }

    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::Pair { .. } => InstanceKind::Pair,
            Instance::IsoUnitary { .. } => InstanceKind::IsoUnitary,
            Instance::Measure { .. } => InstanceKind::Measure,
            Instance::ResolventSamples { .. } => InstanceKind::ResolventSamples,
        }
    }
}

/// Every point at which the verifiers and the reconstruction pipeline may
/// query a sampler: the two-variable sample grid (as a tensor product) and
/// the circle nodes of the moment extraction for an `n × n` grid.
pub fn sample_points(grid: &SampleGrid, grid_n: usize) -> Vec<(ExtPoint, ExtPoint)> {
    let pts = grid.pair_points().points;
    let mut out: Vec<(ExtPoint, ExtPoint)> = Vec::with_capacity(pts.len() * pts.len());
    for &a in &pts {
        for &b in &pts {
            out.push((a, b));
        }
    }
    let (first, second) = chart_points(grid_n, grid_n, &TaylorConfig::default());
    for &a in &first {
        for &b in &second {
            out.push((a.into(), b.into()));
        }
    }
    out
}

/// Tabulates a sampler at [`sample_points`].
pub fn tabulate<S: PairSampler + ?Sized>(s: &S, grid: &SampleGrid, grid_n: usize) -> Result<Vec<PairSample>> {
    use rayon::prelude::*;
    sample_points(grid, grid_n)
        .par_iter()
        .map(|&(z1, z2)| {
            Ok(PairSample {
                z1,
                z2,
                value: extended_eval(s, z1, z2)?,
            })
        })
        .collect()
}

/// Deterministic instance for a validated spec.
///
/// * `pair`: commuting unitaries on `ℂ^big_dim` with joint spectrum on the
///   `grid_n × grid_n` grid and a random embedding of `ℂ^dim`.
/// * `iso-unitary`: `(V, U, J)` on `ℂ^dim` with `U D(V) = D(V)`, `UJ = JU⁻¹`
///   and `J D(V) = R(V)`.
/// * `measure`: a normalized operator measure on `ℂ^dim` supported on
///   `⌈big_dim / dim⌉` cells.
/// * `resolvent-samples`: the resolvent of a `pair` instance tabulated at
///   [`sample_points`] for the default sample grid.
pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let s = Some(spec.clone());
    Ok(match spec.kind {
        InstanceKind::Pair => Instance::Pair {
            spec: s,
            pair: random::random_grid_pair(&mut rng, spec.dim, spec.big_dim, spec.grid_n),
        },
        InstanceKind::IsoUnitary => {
            let inst = random::random_iso_unitary(&mut rng, spec.dim);
            Instance::IsoUnitary {
                spec: s,
                pair: IsoUnitaryPair::new(inst.v, inst.u)?,
                j: inst.j,
            }
        }
        InstanceKind::Measure => Instance::Measure {
            spec: s,
            measure: random::random_operator_measure(
                &mut rng,
                spec.dim,
                spec.grid_n,
                spec.grid_n,
                spec.big_dim.div_ceil(spec.dim),
            ),
        },
        InstanceKind::ResolventSamples => {
            let pair = random::random_grid_pair(&mut rng, spec.dim, spec.big_dim, spec.grid_n);
            Instance::ResolventSamples {
                spec: s,
                dim: spec.dim,
                samples: tabulate(&pair, &SampleGrid::default(), spec.grid_n)?,
            }
        }
    })
}

/// Turns a samples instance into a sampler.
pub fn samples_sampler(dim: usize, samples: &[PairSample]) -> Result<TabulatedPairSampler> {
    TabulatedPairSampler::new(dim, samples.to_vec())
}
