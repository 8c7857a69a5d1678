//! Trigonometric moments read off Taylor coefficients of the kernel sum.
//!
//! Inside the disk `K(z,θ) = 1 + 2 Σ_{k≥1} z^k e^{ikθ}`; outside, in the
//! variable `u = 1/z`, `K = −1 − 2 Σ_{k≥1} u^k e^{−ikθ}`. Each of the four
//! charts (inside/outside per variable) therefore yields a quadrant of the
//! moment table, and the charts overlap on the axes `k = 0` or `l = 0`.

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::matrix::{CMatrix, C64};
use crate::pair::PairSampler;
use crate::tol;

use super::fft::fft2;
use super::table::{MomentKind, MomentTable};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorConfig {
    /// Smallest sampling radius.
    pub radius: f64,
    /// Largest admissible roundoff growth `r^{−(n−1)}(1 + r)/(1 − r)` of the
    /// highest extracted coefficient. The radius grows until this holds.
    pub max_amplification: f64,
    /// Aliasing target `r^N` for the node count `N`.
    pub aliasing: f64,
    /// Node count cap per circle; it bounds the radius by `aliasing^{1/max_nodes}`.
    pub max_nodes: usize,
    /// Moments below this magnitude are set to zero.
    pub truncate: f64,
}

impl Default for TaylorConfig {
    fn default() -> Self {
        Self {
            radius: 0.5,
            max_amplification: 1e3,
            aliasing: 1e-17,
            max_nodes: 512,
            truncate: 1e-13,
        }
    }
}

/// Sampling radius and node count for extracting coefficients `0..n` in one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirclePlan {
    pub radius: f64,
    pub nodes: usize,
}

fn amplification(r: f64, n: usize) -> f64 {
    r.powi(1 - n as i32) * (1.0 + r) / (1.0 - r)
}

impl TaylorConfig {
    pub fn plan(&self, n: usize) -> CirclePlan {
        let radius = self.radius_for(n);
        let for_aliasing = (self.aliasing.ln() / radius.ln() - 1e-9).ceil() as usize;
        let nodes = (4 * n).max(for_aliasing).next_power_of_two();
        CirclePlan { radius, nodes }
    }

    fn radius_for(&self, n: usize) -> f64 {
        if n <= 1 || amplification(self.radius, n) <= self.max_amplification {
            return self.radius;
        }
        // The growth is smallest at the positive root of (n−1)r² + 2r − (n−1).
        let m = (n - 1) as f64;
        let best = ((1.0 + m * m).sqrt() - 1.0) / m;
        let cap = self.aliasing.powf(1.0 / self.max_nodes as f64);
        let hi = best.min(cap).max(self.radius);
        if amplification(hi, n) > self.max_amplification {
            return hi;
        }
        let mut lo = self.radius;
        let mut hi = hi;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if amplification(mid, n) > self.max_amplification {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Inside,
    Outside,
}

const CHARTS: [(Side, Side); 4] = [
    (Side::Inside, Side::Inside),
    (Side::Outside, Side::Inside),
    (Side::Inside, Side::Outside),
    (Side::Outside, Side::Outside),
];

impl Side {
    fn point(self, w: C64) -> C64 {
        match self {
            Side::Inside => w,
            Side::Outside => w.inv(),
        }
    }

    /// Coefficient of order `a` divided by the moment it encodes.
    fn factor(self, a: usize) -> f64 {
        let base = if a == 0 { 1.0 } else { 2.0 };
        match self {
            Side::Inside => base,
            Side::Outside => -base,
        }
    }

    fn sign(self) -> i64 {
        match self {
            Side::Inside => 1,
            Side::Outside => -1,
        }
    }
}

/// Nodes `r e^{2πip/N}` of a circle plan.
pub fn circle_nodes(plan: CirclePlan) -> Vec<C64> {
    (0..plan.nodes)
        .map(|p| C64::from_polar(plan.radius, TAU * p as f64 / plan.nodes as f64))
        .collect()
}

/// All sampler arguments used by the extraction for an `n₁ × n₂` grid.
pub fn chart_points(n1: usize, n2: usize, cfg: &TaylorConfig) -> (Vec<C64>, Vec<C64>) {
    let w1 = circle_nodes(cfg.plan(n1));
    let w2 = circle_nodes(cfg.plan(n2));
    let mut first: Vec<C64> = w1.clone();
    first.extend(w1.iter().map(|w| w.inv()));
    let mut second: Vec<C64> = w2.clone();
    second.extend(w2.iter().map(|w| w.inv()));
    (first, second)
}

/// Matrix samples of a sampler on the four chart tori.
pub struct ChartSamples {
    n1: usize,
    n2: usize,
    plans: (CirclePlan, CirclePlan),
    values: Vec<Vec<CMatrix>>,
}

impl ChartSamples {
    pub fn collect<S: PairSampler + ?Sized>(s: &S, n1: usize, n2: usize, cfg: &TaylorConfig) -> Result<Self> {
        let plans = (cfg.plan(n1), cfg.plan(n2));
        let w1 = circle_nodes(plans.0);
        let w2 = circle_nodes(plans.1);
        let values = CHARTS
            .iter()
            .map(|&(s1, s2)| {
                let rows: Vec<Result<Vec<CMatrix>>> = w1
                    .par_iter()
                    .map(|&a| w2.iter().map(|&b| s.eval(s1.point(a), s2.point(b))).collect())
                    .collect();
                let mut flat = Vec::with_capacity(w1.len() * w2.len());
                for row in rows {
                    flat.extend(row?);
                }
                Ok(flat)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n1, n2, plans, values })
    }

    /// Moments of the scalar function `φ(R_{z₁,z₂})`.
    pub fn moments(&self, phi: impl Fn(&CMatrix) -> C64, cfg: &TaylorConfig) -> Result<MomentTable> {
        let scalars: Vec<Vec<C64>> = self.values.iter().map(|v| v.iter().map(&phi).collect()).collect();
        moments_from_chart_values(scalars, self.n1, self.n2, self.plans, cfg)
    }
}

fn moments_from_chart_values(
    charts: Vec<Vec<C64>>,
    n1: usize,
    n2: usize,
    plans: (CirclePlan, CirclePlan),
    cfg: &TaylorConfig,
) -> Result<MomentTable> {
    let (k_max, l_max) = (n1 as i64 - 1, n2 as i64 - 1);
    let mut table = MomentTable::zeros(MomentKind::Trigonometric, -k_max..=k_max, -l_max..=l_max);
    let mut seen = vec![false; (2 * n1 - 1) * (2 * n2 - 1)];
    let (p1, p2) = plans;
    let scale = 1.0 / (p1.nodes * p2.nodes) as f64;
    let mut mismatch = 0.0f64;
    for (mut data, &(s1, s2)) in charts.into_iter().zip(CHARTS.iter()) {
        fft2(&mut data, p1.nodes, p2.nodes);
        for a in 0..n1 {
            for b in 0..n2 {
                let c = data[a * p2.nodes + b] * scale
                    / (p1.radius.powi(a as i32) * p2.radius.powi(b as i32));
                let s = c / (s1.factor(a) * s2.factor(b));
                let (k, l) = (s1.sign() * a as i64, s2.sign() * b as i64);
                let slot = ((k + k_max) as usize) * (2 * n2 - 1) + (l + l_max) as usize;
                if seen[slot] {
                    mismatch = mismatch.max((table.get(k, l).unwrap_or_default() - s).norm());
                } else {
                    seen[slot] = true;
                    table.set(k, l, s);
                }
            }
        }
    }
    if mismatch > tol::MOMENT {
        return Err(Error::ChartInconsistency(mismatch));
    }
    let truncated: Vec<(i64, i64, C64)> = table
        .entries()
        .map(|(k, l, v)| {
            let re = if v.re.abs() < cfg.truncate { 0.0 } else { v.re };
            let im = if v.im.abs() < cfg.truncate { 0.0 } else { v.im };
            (k, l, C64::new(re, im))
        })
        .collect();
    for (k, l, v) in truncated {
        table.set(k, l, v);
    }
    Ok(table)
}

/// Moments `s_{k,l}`, `|k| < n₁`, `|l| < n₂`, of the measure behind a scalar
/// (`1 × 1`) sampler of kernel-sum form.
pub fn taylor_moments_from_sampler<S: PairSampler + ?Sized>(f: &S, n1: usize, n2: usize) -> Result<MomentTable> {
    taylor_moments_with(f, n1, n2, &TaylorConfig::default())
}

pub fn taylor_moments_with<S: PairSampler + ?Sized>(
    f: &S,
    n1: usize,
    n2: usize,
    cfg: &TaylorConfig,
) -> Result<MomentTable> {
    if f.dim() != 1 {
        return Err(Error::Shape(format!("expected a scalar function, found dimension {}", f.dim())));
    }
    if n1 == 0 || n2 == 0 {
        return Err(Error::Shape("grid sizes must be positive".into()));
    }
    ChartSamples::collect(f, n1, n2, cfg)?.moments(|m| m[(0, 0)], cfg)
}
