use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::linalg::{C64, ZERO};

use super::torus::frac_mul;

/// Side of the vertex grid used for sup-norm certificates.
pub const SUP_GRID_SIDE: usize = 256;

/// `α(x, y) = Σ c_{k,l} e^{2πi(kx + ly)}` with finitely many terms.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TrigPolynomial {
    coefficients: BTreeMap<(i32, i32), C64>,
}

impl TrigPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(k, l, c)` triples; repeated modes are summed and exact
    /// zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (i32, i32, C64)>>(terms: I) -> Self {
        let mut p = Self::new();
        for (k, l, c) in terms {
            *p.coefficients.entry((k, l)).or_insert(ZERO) += c;
        }
        p.coefficients.retain(|_, c| *c != ZERO);
        p
    }

    pub fn constant(c: C64) -> Self {
        Self::from_terms([(0, 0, c)])
    }

    /// `(e^{2πix} + e^{2πiy}) / 2`.
    pub fn two_mode_average() -> Self {
        let h = C64::new(0.5, 0.0);
        Self::from_terms([(1, 0, h), (0, 1, h)])
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, C64)> + '_ {
        self.coefficients.iter().map(|(&(k, l), &c)| (k, l, c))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// True when some mode other than `(0, 0)` is present.
    pub fn is_nonconstant(&self) -> bool {
        self.coefficients.keys().any(|&kl| kl != (0, 0))
    }

    /// Degree bounds `(K, L)`: the largest `|k|` and `|l|`.
    pub fn degree(&self) -> (u32, u32) {
        self.coefficients.keys().fold((0, 0), |(dk, dl), &(k, l)| {
            (dk.max(k.unsigned_abs()), dl.max(l.unsigned_abs()))
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> C64 {
        let mut acc = ZERO;
        for (&(k, l), &c) in &self.coefficients {
            // phase reduced exactly mod 1 before the trig call
            let t = frac_mul(k as f64, x) + frac_mul(l as f64, y);
            acc += c * C64::from_polar(1.0, TAU * t);
        }
        acc
    }

    /// `Σ |c_{k,l}|`, an upper bound for `sup |α|`.
    pub fn l1_norm(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm()).sum()
    }

    /// `Σ |c_{k,l}| e^{2π(|k|h₁ + |l|h₂)}`, the sup of the analytic extension
    /// over the strip of widths `(h₁, h₂)`.
    pub fn strip_norm(&self, h1: f64, h2: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|(&(k, l), c)| {
                c.norm()
                    * (TAU * (k.unsigned_abs() as f64 * h1 + l.unsigned_abs() as f64 * h2)).exp()
            })
            .sum()
    }

    /// Lipschitz constant of `α` in the sup-metric on each coordinate:
    /// `2π Σ |c| (|k| + |l|)`.
    pub fn lipschitz(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|(&(k, l), c)| TAU * c.norm() * (k.unsigned_abs() + l.unsigned_abs()) as f64)
            .sum()
    }

    /// Max of `|α|` over the `side × side` vertex grid.
    pub fn grid_sup(&self, side: usize) -> f64 {
        let h = 1.0 / side as f64;
        (0..side)
            .into_par_iter()
            .map(|i| {
                (0..side)
                    .map(|j| self.eval(i as f64 * h, j as f64 * h).norm())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Certified upper bound for `sup |α|`: the smaller of the ℓ¹ bound and
    /// the grid maximum plus a Lipschitz correction for the half-cell gap.
    pub fn sup_certificate(&self, side: usize) -> SupCertificate {
        let grid = self.grid_sup(side);
        let l1 = self.l1_norm();
        let gap = 0.5 / side as f64;
        let lipschitz_bound = grid + self.lipschitz() * gap;
        SupCertificate {
            grid,
            l1,
            bound: l1.min(lipschitz_bound),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupCertificate {
    /// Max over the vertex grid (a lower bound for the true sup).
    pub grid: f64,
    pub l1: f64,
    /// Rigorous upper bound.
    pub bound: f64,
}
