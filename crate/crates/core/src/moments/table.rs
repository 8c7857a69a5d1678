use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::linalg::matrix::C64;

use super::measure::{grid_angle, GridScalarMeasure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentKind {
    /// `s_{k,l} = ∫ e^{ikt₁} e^{ilt₂} dμ`.
    Trigonometric,
    /// `r_{m,n} = ∫ t₁^m t₂^n dμ`.
    Power,
}

/// Moments indexed by a rectangle of integer pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub kind: MomentKind,
    k_lo: i64,
    k_hi: i64,
    l_lo: i64,
    l_hi: i64,
    #[serde(with = "crate::linalg::json::complexes")]
    values: Vec<C64>,
}

impl MomentTable {
    pub fn zeros(kind: MomentKind, k: RangeInclusive<i64>, l: RangeInclusive<i64>) -> Self {
        let (k_lo, k_hi, l_lo, l_hi) = (*k.start(), *k.end(), *l.start(), *l.end());
        let count = ((k_hi - k_lo + 1).max(0) * (l_hi - l_lo + 1).max(0)) as usize;
        Self {
            kind,
            k_lo,
            k_hi,
            l_lo,
            l_hi,
            values: vec![C64::new(0.0, 0.0); count],
        }
    }

    pub fn k_range(&self) -> RangeInclusive<i64> {
        self.k_lo..=self.k_hi
    }

    pub fn l_range(&self) -> RangeInclusive<i64> {
        self.l_lo..=self.l_hi
    }

    fn index(&self, k: i64, l: i64) -> Option<usize> {
        if self.k_range().contains(&k) && self.l_range().contains(&l) {
            let width = (self.l_hi - self.l_lo + 1) as usize;
            Some((k - self.k_lo) as usize * width + (l - self.l_lo) as usize)
        } else {
            None
        }
    }

    pub fn get(&self, k: i64, l: i64) -> Option<C64> {
        self.index(k, l).map(|i| self.values[i])
    }

    pub fn set(&mut self, k: i64, l: i64, v: C64) {
        let i = self.index(k, l).unwrap_or_else(|| panic!("moment index ({k}, {l}) outside the table"));
        self.values[i] = v;
    }

    /// Iterates `(k, l, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, C64)> + '_ {
        let width = (self.l_hi - self.l_lo + 1) as usize;
        self.values.iter().enumerate().map(move |(i, &v)| {
            (self.k_lo + (i / width) as i64, self.l_lo + (i % width) as i64, v)
        })
    }

    /// Largest `|s_{k,l} − s'_{k,l}|` over the indices both tables share.
    pub fn max_difference(&self, other: &MomentTable) -> f64 {
        self.entries()
            .filter_map(|(k, l, v)| other.get(k, l).map(|w| (v - w).norm()))
            .fold(0.0, f64::max)
    }

    /// `max |s_{−k,−l} − conj(s_{k,l})|`; zero for real measures.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        self.entries()
            .filter_map(|(k, l, v)| self.get(-k, -l).map(|w| (w - v.conj()).norm()))
            .fold(0.0, f64::max)
    }

    /// `max |s_{k,l}| − s_{0,0}`; non-positive for nonnegative measures.
    pub fn bound_excess(&self) -> f64 {
        let Some(s00) = self.get(0, 0) else {
            return f64::INFINITY;
        };
        self.entries().map(|(_, _, v)| v.norm() - s00.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with columns `k, l, re_s, im_s`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,l,re_s,im_s\n");
        for (k, l, v) in self.entries() {
            let _ = writeln!(out, "{k},{l},{:e},{:e}", v.re, v.im);
        }
        out
    }
}

/// Trigonometric moments `s_{k,l}` for `|k| ≤ k_max`, `|l| ≤ l_max`.
pub fn moments_from_measure(m: &GridScalarMeasure, k_max: usize, l_max: usize) -> MomentTable {
    let (k_max, l_max) = (k_max as i64, l_max as i64);
    let mut t = MomentTable::zeros(MomentKind::Trigonometric, -k_max..=k_max, -l_max..=l_max);
    let atoms: Vec<(f64, f64, C64)> = m
        .cells()
        .filter(|(_, _, w)| w.norm() > 0.0)
        .map(|(j, k, w)| (grid_angle(j, m.n1()), grid_angle(k, m.n2()), w))
        .collect();
    for k in -k_max..=k_max {
        for l in -l_max..=l_max {
            let s = atoms
                .iter()
                .map(|&(t1, t2, w)| w * C64::from_polar(1.0, k as f64 * t1 + l as f64 * t2))
                .sum();
            t.set(k, l, s);
        }
    }
    t
}

/// Power moments `r_{m,n} = Σ w θ₁^m θ₂^n`, `0 ≤ m ≤ m_max`, `0 ≤ n ≤ n_max`,
/// with grid angles in `(0, 2π]`.
pub fn power_moments(m: &GridScalarMeasure, m_max: usize, n_max: usize) -> MomentTable {
    let mut t = MomentTable::zeros(MomentKind::Power, 0..=m_max as i64, 0..=n_max as i64);
    for a in 0..=m_max {
        for b in 0..=n_max {
            let s = m
                .cells()
                .map(|(j, k, w)| w * grid_angle(j, m.n1()).powi(a as i32) * grid_angle(k, m.n2()).powi(b as i32))
                .sum();
            t.set(a as i64, b as i64, s);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn atom_at_pi_moments() {
        let m = GridScalarMeasure::atom(2, 2, 1, 1, ONE);
        let t = moments_from_measure(&m, 1, 1);
        assert_abs_diff_eq!((t.get(1, 0).unwrap() + ONE).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((t.get(1, 1).unwrap() - ONE).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((t.get(0, 0).unwrap() - ONE).norm(), 0.0);
        assert!(t.conjugate_symmetry_residual() < 1e-14);
    }

    #[test]
    fn power_moment_examples() {
        let m = GridScalarMeasure::atom(1, 1, 1, 1, ONE);
        assert_abs_diff_eq!(power_moments(&m, 1, 1).get(1, 1).unwrap().re, 4.0 * PI * PI, epsilon = 1e-12);
        let mut two = GridScalarMeasure::zeros(2, 2);
        two.set(1, 1, ONE * 0.5);
        two.set(2, 2, ONE * 0.5);
        let r = power_moments(&two, 1, 0);
        assert_abs_diff_eq!(r.get(1, 0).unwrap().re, 1.5 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(r.get(0, 0).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn csv_layout() {
        let t = MomentTable::zeros(MomentKind::Trigonometric, 0..=0, 0..=1);
        let csv = t.to_csv();
        assert!(csv.starts_with("k,l,re_s,im_s\n0,0,"));
        assert_eq!(csv.lines().count(), 3);
    }
}
