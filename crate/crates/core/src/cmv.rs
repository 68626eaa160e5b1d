//! Finite boundary-modified CMV windows and their LM factorization.
//!
//! A window `[a, b]` is built from the Θ blocks with absolute indices
//! `a−1 ..= b`; block `n` acts on sites `(n, n+1)` and is cut to the window.
//! The boundary values replace the coefficients at `a−1` (β) and `b` (γ), so
//! the two cut blocks contribute the scalars `−β` at site `a` and `γ̄` at
//! site `b`. Even blocks form `L`, odd blocks `M`, and `E = L·M`.

use std::fmt::Write as _;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{CmvError, Result};
use crate::linalg::{self, Mat2, C64, ONE, ZERO};
use crate::model::{rho, VerblunskyScheme};

/// Tolerance on `|β| = |γ| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPair {
    pub beta: C64,
    pub gamma: C64,
}

impl BoundaryPair {
    pub fn new(beta: C64, gamma: C64) -> Self {
        BoundaryPair { beta, gamma }
    }

    /// The half-line convention `α_{−1} = −1` on the left.
    pub fn half_line(gamma: C64) -> Self {
        BoundaryPair { beta: -ONE, gamma }
    }

    pub fn is_unimodular(&self) -> bool {
        (self.beta.norm() - 1.0).abs() <= UNIMODULAR_TOL
            && (self.gamma.norm() - 1.0).abs() <= UNIMODULAR_TOL
    }
}

impl Default for BoundaryPair {
    fn default() -> Self {
        BoundaryPair {
            beta: ONE,
            gamma: ONE,
        }
    }
}

/// `Θ(α) = [[ᾱ, ρ], [ρ, −α]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaBlock(pub Mat2);

pub fn theta_block(alpha: C64) -> Result<ThetaBlock> {
    let m = alpha.norm();
    if !(m <= 1.0 + UNIMODULAR_TOL) {
        return Err(CmvError::InvalidCoefficient {
            modulus: m,
            requirement: "<= 1",
        });
    }
    Ok(theta_unchecked(alpha))
}

fn theta_unchecked(alpha: C64) -> ThetaBlock {
    let r = C64::new(rho(alpha), 0.0);
    ThetaBlock(Mat2::new(alpha.conj(), r, r, -alpha))
}

#[derive(Clone, Debug)]
pub struct CmvWindow {
    a: i64,
    b: i64,
    raw: Vec<C64>,
    effective: Vec<C64>,
    left: Option<C64>,
    right: Option<C64>,
    l: Mat<C64>,
    m: Mat<C64>,
    e: Mat<C64>,
    scheme_hash: Option<String>,
}

impl CmvWindow {
    /// Build a window from the raw coefficients `α_{a−1}, …, α_b`.
    ///
    /// `left` / `right`, when present, replace `α_{a−1}` / `α_b`. A window of
    /// size `n` needs `n + 1` raw coefficients.
    pub fn from_coefficients(
        a: i64,
        raw: Vec<C64>,
        left: Option<C64>,
        right: Option<C64>,
    ) -> Result<Self> {
        if raw.len() < 2 {
            return Err(CmvError::InvalidInput(format!(
                "a window needs at least 2 coefficients (got {})",
                raw.len()
            )));
        }
        for &alpha in &raw {
            theta_block(alpha)?;
        }
        for v in [left, right].into_iter().flatten() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(CmvError::InvalidInput("non-finite boundary value".into()));
            }
        }
        let size = raw.len() - 1;
        let b = a + size as i64 - 1;
        let mut effective = raw.clone();
        if let Some(beta) = left {
            effective[0] = beta;
        }
        if let Some(gamma) = right {
            effective[size] = gamma;
        }

        let mut l = Mat::<C64>::zeros(size, size);
        let mut m = Mat::<C64>::zeros(size, size);
        for (idx, &alpha) in effective.iter().enumerate() {
            let n = a - 1 + idx as i64;
            let block = theta_unchecked(alpha).0 .0;
            let target = if n.rem_euclid(2) == 0 { &mut l } else { &mut m };
            // local site indices of (n, n+1); the first is -1 for n = a-1
            let s0 = idx as i64 - 1;
            for (bi, si) in [(0usize, s0), (1, s0 + 1)] {
                for (bj, sj) in [(0usize, s0), (1, s0 + 1)] {
                    if (0..size as i64).contains(&si) && (0..size as i64).contains(&sj) {
                        target[(si as usize, sj as usize)] = block[bi][bj];
                    }
                }
            }
        }
        let e = banded_product(&l, &m);
        Ok(CmvWindow {
            a,
            b,
            raw,
            effective,
            left,
            right,
            l,
            m,
            e,
            scheme_hash: None,
        })
    }

    pub fn size(&self) -> usize {
        self.raw.len() - 1
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.e
    }

    pub fn l(&self) -> &Mat<C64> {
        &self.l
    }

    pub fn m(&self) -> &Mat<C64> {
        &self.m
    }

    /// Effective coefficients `α̃_{a−1}, …, α̃_b`.
    pub fn effective_coefficients(&self) -> &[C64] {
        &self.effective
    }

    /// Unsubstituted coefficients `α_{a−1}, …, α_b`.
    pub fn raw_coefficients(&self) -> &[C64] {
        &self.raw
    }

    /// Raw `α_n` for `a−1 ≤ n ≤ b`.
    pub fn raw_alpha(&self, n: i64) -> C64 {
        self.raw[(n - self.a + 1) as usize]
    }

    pub fn raw_rho(&self, n: i64) -> f64 {
        rho(self.raw_alpha(n))
    }

    pub fn left_boundary(&self) -> Option<C64> {
        self.left
    }

    pub fn right_boundary(&self) -> Option<C64> {
        self.right
    }

    /// Effective `α̃_{a−1}` (β when substituted).
    pub fn beta(&self) -> C64 {
        self.effective[0]
    }

    /// Effective `α̃_b` (γ when substituted).
    pub fn gamma(&self) -> C64 {
        self.effective[self.size()]
    }

    pub fn is_unimodular(&self) -> bool {
        (self.beta().norm() - 1.0).abs() <= UNIMODULAR_TOL
            && (self.gamma().norm() - 1.0).abs() <= UNIMODULAR_TOL
    }

    /// `ρ_a ⋯ ρ_b` of the unsubstituted coefficients.
    pub fn interior_rho_product(&self) -> f64 {
        (self.a..=self.b).map(|n| self.raw_rho(n)).product()
    }

    pub fn scheme_hash(&self) -> Option<&str> {
        self.scheme_hash.as_deref()
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.e).max(linalg::co_unitarity_defect(&self.e))
    }

    pub fn factorization_defect(&self) -> f64 {
        linalg::max_abs_diff(&(&self.l * &self.m), &self.e)
    }

    /// Largest `|E_{ij}|` with `|i − j| > 2`; zero by construction.
    pub fn off_band_max(&self) -> f64 {
        let n = self.size();
        let mut out: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i.abs_diff(j) > 2 {
                    out = out.max(self.e[(i, j)].norm());
                }
            }
        }
        out
    }

    /// The same window with every site re-phased by `D = diag(signs)`:
    /// returns `D E D*`.
    pub fn conjugated_matrix(&self, signs: &[C64]) -> Mat<C64> {
        let n = self.size();
        Mat::from_fn(n, n, |i, j| signs[i] * self.e[(i, j)] * signs[j].conj())
    }

    pub fn metadata(&self) -> WindowMetadata {
        WindowMetadata {
            a: self.a,
            b: self.b,
            size: self.size(),
            beta: [self.beta().re, self.beta().im],
            gamma: [self.gamma().re, self.gamma().im],
            scheme_hash: self.scheme_hash.clone(),
        }
    }

    /// Dense Matrix Market text (`array complex general`, column-major).
    pub fn to_matrix_market(&self) -> String {
        let n = self.size();
        let mut out = String::with_capacity(32 * n * n + 128);
        out.push_str("%%MatrixMarket matrix array complex general\n");
        let _ = writeln!(out, "% window [{}, {}]", self.a, self.b);
        if let Some(h) = &self.scheme_hash {
            let _ = writeln!(out, "% scheme {h}");
        }
        let _ = writeln!(out, "{n} {n}");
        for j in 0..n {
            for i in 0..n {
                let z = self.e[(i, j)];
                let _ = writeln!(out, "{:e} {:e}", z.re, z.im);
            }
        }
        out
    }
}

/// Provenance record written next to exported windows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowMetadata {
    pub a: i64,
    pub b: i64,
    pub size: usize,
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
    pub scheme_hash: Option<String>,
}

/// Parse the output of [`CmvWindow::to_matrix_market`].
pub fn parse_matrix_market(text: &str) -> Result<Mat<C64>> {
    let bad = |m: &str| CmvError::InvalidInput(format!("matrix market: {m}"));
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('%') && !l.trim().is_empty());
    let dims = lines.next().ok_or_else(|| bad("missing size line"))?;
    let dims: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("bad size line")))
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        return Err(bad("bad size line"));
    }
    let (r, c) = (dims[0], dims[1]);
    let mut vals = Vec::with_capacity(r * c);
    for line in lines {
        let mut it = line.split_whitespace();
        let re: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("bad entry"))?;
        let im: f64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("bad entry"))?;
        vals.push(C64::new(re, im));
    }
    if vals.len() != r * c {
        return Err(bad("entry count mismatch"));
    }
    Ok(Mat::from_fn(r, c, |i, j| vals[j * r + i]))
}

/// `L·M` touching only the structural nonzeros, so entries outside the
/// pentadiagonal band stay exactly zero.
fn banded_product(l: &Mat<C64>, m: &Mat<C64>) -> Mat<C64> {
    let n = l.nrows();
    let mut e = Mat::<C64>::zeros(n, n);
    for i in 0..n {
        for k in i.saturating_sub(1)..(i + 2).min(n) {
            let lik = l[(i, k)];
            if lik == ZERO {
                continue;
            }
            for j in k.saturating_sub(1)..(k + 2).min(n) {
                e[(i, j)] += lik * m[(k, j)];
            }
        }
    }
    e
}

/// `E^{β,γ}_{[a,b]}` for a scheme.
pub fn assemble_window(
    s: &VerblunskyScheme,
    a: i64,
    b: i64,
    bc: BoundaryPair,
) -> Result<CmvWindow> {
    if b < a {
        return Err(CmvError::InvalidInput(format!("empty interval [{a}, {b}]")));
    }
    let raw = s.coefficients(a - 1, b);
    let mut w = CmvWindow::from_coefficients(a, raw, Some(bc.beta), Some(bc.gamma))?;
    w.scheme_hash = Some(s.hash());
    Ok(w)
}

/// `Φ = det(z − E)` and `φ = Φ / (ρ_a ⋯ ρ_b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharPoly {
    pub phi_cap: C64,
    pub phi: C64,
}

impl CharPoly {
    /// Convention for empty intervals.
    pub fn empty() -> Self {
        CharPoly {
            phi_cap: ONE,
            phi: ONE,
        }
    }
}

pub fn char_poly(w: &CmvWindow, z: C64) -> CharPoly {
    let phi_cap = linalg::determinant(&linalg::shifted(&w.e, z));
    CharPoly {
        phi_cap,
        phi: phi_cap / w.interior_rho_product(),
    }
}
