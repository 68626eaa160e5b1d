//! Finite-volume Green's functions `G = (z L* − M)^{-1}` of a window.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::cmv::{char_poly, CharPoly, CmvWindow};
use crate::error::{CmvError, Result};
use crate::linalg::{self, fit_line, C64};
use crate::model::rho;

#[derive(Clone, Debug)]
pub struct GreenMatrix {
    pub a: i64,
    pub b: i64,
    pub z: C64,
    pub entries: Mat<C64>,
    /// `‖(zL* − M)G − I‖_max`.
    pub residual: f64,
}

impl GreenMatrix {
    /// `G(j, k)` by absolute site indices.
    pub fn at(&self, j: i64, k: i64) -> C64 {
        self.entries[((j - self.a) as usize, (k - self.a) as usize)]
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }
}

/// `z L* − M` for a window.
pub fn green_operator(w: &CmvWindow, z: C64) -> Mat<C64> {
    let n = w.size();
    let l = w.l();
    let m = w.m();
    Mat::from_fn(n, n, |i, j| z * l[(j, i)].conj() - m[(i, j)])
}

pub fn green_matrix(w: &CmvWindow, z: C64) -> Result<GreenMatrix> {
    let t = green_operator(w, z);
    let g = linalg::inverse(&t);
    let prod = &t * &g;
    let residual = linalg::max_abs_diff(&prod, &linalg::identity(w.size()));
    if !(residual <= 1e-6) {
        return Err(CmvError::ZInSpectrum(format!(
            "window [{}, {}], z = {z}, solve residual {residual:e}",
            w.a(),
            w.b()
        )));
    }
    Ok(GreenMatrix {
        a: w.a(),
        b: w.b(),
        z,
        entries: g,
        residual,
    })
}

/// Prefactor used in the determinant-ratio formula for `|G(j, k)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrefactorForm {
    /// `1/ρ_k`, which matches direct inversion.
    #[default]
    Derived,
    /// `1/(ρ_j ρ_k)`, off by a factor `ρ_j`; kept for comparison.
    Displayed,
}

/// Normalized characteristic polynomial of the sub-window `[lo, hi]` of `w`,
/// keeping the window's boundary value only on the side(s) where the
/// sub-window reaches the window edge.
fn sub_phi(w: &CmvWindow, lo: i64, hi: i64, z: C64) -> Result<CharPoly> {
    if hi < lo {
        return Ok(CharPoly::empty());
    }
    let raw = w.raw_coefficients();
    let first = (lo - 1 - (w.a() - 1)) as usize;
    let last = (hi - (w.a() - 1)) as usize;
    let left = if lo == w.a() { w.left_boundary() } else { None };
    let right = if hi == w.b() {
        w.right_boundary()
    } else {
        None
    };
    let sub = CmvWindow::from_coefficients(lo, raw[first..=last].to_vec(), left, right)?;
    Ok(char_poly(&sub, z))
}

/// `|G(j, k; z)|` for `a ≤ j ≤ k ≤ b` from
/// `ρ_k^{-1} |φ_{[a, j−1]} φ_{[k+1, b]} / φ_{[a, b]}|`.
///
/// The left factor carries β and the raw `α_{j−1}` at its edges, the right
/// factor the raw `α_k` and γ. Only valid on the unit circle.
pub fn green_entry_via_polys(
    w: &CmvWindow,
    j: i64,
    k: i64,
    z: C64,
    form: PrefactorForm,
) -> Result<f64> {
    if !(w.a() <= j && j <= k && k <= w.b()) {
        return Err(CmvError::InvalidInput(format!(
            "need a <= j <= k <= b (a = {}, j = {j}, k = {k}, b = {})",
            w.a(),
            w.b()
        )));
    }
    if (z.norm() - 1.0).abs() > 1e-10 {
        return Err(CmvError::InvalidInput(format!(
            "polynomial formula needs |z| = 1 (got {})",
            z.norm()
        )));
    }
    let left = sub_phi(w, w.a(), j - 1, z)?;
    let right = sub_phi(w, k + 1, w.b(), z)?;
    let full = char_poly(w, z);
    let ratio = (left.phi * right.phi / full.phi).norm();
    let pref = match form {
        PrefactorForm::Derived => 1.0 / w.raw_rho(k),
        PrefactorForm::Displayed => 1.0 / (w.raw_rho(j) * w.raw_rho(k)),
    };
    Ok(pref * ratio)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub rate: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Least squares of `log|G(j, k)|` against `−|j − k|` over off-diagonal
/// entries.
pub fn green_decay_fit(g: &GreenMatrix) -> Result<DecayFit> {
    let n = g.size();
    if n < 16 {
        return Err(CmvError::InvalidInput(format!(
            "decay fit needs size >= 16 (got {n})"
        )));
    }
    let mut xs = Vec::with_capacity(n * n);
    let mut ys = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                xs.push(-(i.abs_diff(j) as f64));
                ys.push(g.entries[(i, j)].norm().max(1e-300).ln());
            }
        }
    }
    let f = fit_line(&xs, &ys).expect("off-diagonal distances are not constant");
    Ok(DecayFit {
        rate: f.slope,
        intercept: f.intercept,
        r2: f.r2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DavisSimon {
    pub dist: f64,
    pub resolvent_norm: f64,
    /// `dist(z, spec E)·‖(z − E)^{-1}‖₂`.
    pub product: f64,
    /// `cot(π / (4·size))`.
    pub bound: f64,
    pub holds: bool,
}

pub fn davis_simon_gap(w: &CmvWindow, z: C64) -> Result<DavisSimon> {
    let e = w.matrix();
    let n = w.size();
    let norm = linalg::singular_values(e)
        .ok_or_else(|| CmvError::Eigensolver(format!("[{}, {}]", w.a(), w.b())))?[0];
    if z.norm() < norm * (1.0 - 1e-12) {
        return Err(CmvError::InvalidInput(format!(
            "need |z| >= ||E|| (|z| = {}, ||E|| = {norm})",
            z.norm()
        )));
    }
    let ev = linalg::eigenvalues(e)
        .ok_or_else(|| CmvError::Eigensolver(format!("[{}, {}]", w.a(), w.b())))?;
    let dist = ev
        .iter()
        .map(|&l| (z - l).norm())
        .fold(f64::INFINITY, f64::min);
    let sv = linalg::singular_values(&linalg::shifted(e, z))
        .ok_or_else(|| CmvError::Eigensolver(format!("[{}, {}]", w.a(), w.b())))?;
    let smin = *sv.last().expect("nonempty window");
    if dist < 1e-14 || smin <= 0.0 {
        return Err(CmvError::InvalidInput(format!(
            "z = {z} lies in the spectrum"
        )));
    }
    let resolvent_norm = 1.0 / smin;
    let product = dist * resolvent_norm;
    let bound = 1.0 / (std::f64::consts::PI / (4.0 * n as f64)).tan();
    Ok(DavisSimon {
        dist,
        resolvent_norm,
        product,
        bound,
        holds: product <= bound * (1.0 + 1e-8),
    })
}

/// Which expressions to use for the boundary values `ψ̃(a)`, `ψ̃(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryTermForm {
    /// Read off the boundary rows of `zL̃* − M̃`; satisfies the identity.
    #[default]
    Derived,
    /// Variant with `ρ_b` in the even-`b` branch; fails the identity.
    Displayed,
    /// Variant with `ρ_{b−1}` in both `b` branches; also fails.
    DisplayedSymmetricRho,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TildeBoundaryValues {
    pub at_a: C64,
    pub at_b: C64,
    pub a_even: bool,
    pub b_even: bool,
}

/// `ψ` on `[a−1, b+1]`: `psi[0] = ψ(a−1)`.
fn psi_at(w: &CmvWindow, psi: &[C64], n: i64) -> C64 {
    psi[(n - w.a() + 1) as usize]
}

pub fn tilde_boundary_values(
    w: &CmvWindow,
    z: C64,
    psi: &[C64],
    form: BoundaryTermForm,
) -> Result<TildeBoundaryValues> {
    check_psi_len(w, psi)?;
    let (a, b) = (w.a(), w.b());
    let beta = w.beta();
    let gamma = w.gamma();
    let al = |n: i64| w.raw_alpha(n);
    let r = |n: i64| rho(w.raw_alpha(n));
    let p = |n: i64| psi_at(w, psi, n);
    let a_even = a.rem_euclid(2) == 0;
    let b_even = b.rem_euclid(2) == 0;
    let (at_a, at_b) = match form {
        BoundaryTermForm::Derived => {
            let ta = if a_even {
                (z * al(a) + beta) * p(a) + z * r(a) * p(a + 1)
            } else {
                -(z * beta.conj() + al(a).conj()) * p(a) - r(a) * p(a + 1)
            };
            let tb = if b_even {
                (z * gamma + al(b - 1)) * p(b) - r(b - 1) * p(b - 1)
            } else {
                -(z * al(b - 1).conj() + gamma.conj()) * p(b) + z * r(b - 1) * p(b - 1)
            };
            (ta, tb)
        }
        BoundaryTermForm::Displayed | BoundaryTermForm::DisplayedSymmetricRho => {
            let ta = if a_even {
                (z * beta.conj() - al(a)) * p(a) - r(a) * p(a + 1)
            } else {
                (z * al(a) - beta) * p(a) + z * r(a) * p(a + 1)
            };
            let rb = if form == BoundaryTermForm::Displayed {
                r(b)
            } else {
                r(b - 1)
            };
            let tb = if b_even {
                (z * gamma.conj() - al(b)) * p(b) - rb * p(b - 1)
            } else {
                (z * al(b) - gamma) * p(b) + z * r(b - 1) * p(b - 1)
            };
            (ta, tb)
        }
    };
    Ok(TildeBoundaryValues {
        at_a,
        at_b,
        a_even,
        b_even,
    })
}

fn check_psi_len(w: &CmvWindow, psi: &[C64]) -> Result<()> {
    if psi.len() != w.size() + 2 {
        return Err(CmvError::InvalidInput(format!(
            "psi must cover [a-1, b+1]: expected {} values, got {}",
            w.size() + 2,
            psi.len()
        )));
    }
    Ok(())
}

/// Row `m` of the untruncated `zL* − M`: the coefficients of
/// `ψ(m−1), ψ(m), ψ(m+1)`, from `α_{m−1}` and `α_m`.
pub fn extended_row(alpha_prev: C64, alpha: C64, m: i64, z: C64) -> [C64; 3] {
    let (rp, r) = (C64::new(rho(alpha_prev), 0.0), C64::new(rho(alpha), 0.0));
    if m.rem_euclid(2) == 0 {
        [-rp, z * alpha + alpha_prev, z * r]
    } else {
        [z * rp, -z * alpha_prev.conj() - alpha.conj(), -r]
    }
}

/// Relative residual of `(zL* − M)ψ = 0` on the rows `a..=b`.
pub fn eigen_equation_residual(w: &CmvWindow, z: C64, psi: &[C64]) -> Result<f64> {
    check_psi_len(w, psi)?;
    let scale = psi.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for m in w.a()..=w.b() {
        let row = extended_row(w.raw_alpha(m - 1), w.raw_alpha(m), m, z);
        let v = row[0] * psi_at(w, psi, m - 1)
            + row[1] * psi_at(w, psi, m)
            + row[2] * psi_at(w, psi, m + 1);
        worst = worst.max(v.norm());
    }
    Ok(worst / scale)
}

/// Solve `(zL* − M)ψ = 0` forward from `ψ(first)`, `ψ(first+1)` using the
/// coefficients `alphas[i] = α_{first+i}`; returns `ψ(first), …, ψ(first + alphas.len())`.
pub fn solve_extended(alphas: &[C64], first: i64, z: C64, psi0: C64, psi1: C64) -> Vec<C64> {
    let mut psi = vec![psi0, psi1];
    for i in 1..alphas.len() {
        let m = first + i as i64;
        let row = extended_row(alphas[i - 1], alphas[i], m, z);
        let next = -(row[0] * psi[i - 1] + row[1] * psi[i]) / row[2];
        psi.push(next);
    }
    psi
}

/// `max_{a<n<b} |ψ(n) − G(n,a)ψ̃(a) − G(n,b)ψ̃(b)|`.
pub fn restriction_residual(
    w: &CmvWindow,
    z: C64,
    psi: &[C64],
    form: BoundaryTermForm,
) -> Result<f64> {
    if w.b() - w.a() < 2 {
        return Err(CmvError::InvalidInput(
            "restriction identity needs an interior site".into(),
        ));
    }
    let res = eigen_equation_residual(w, z, psi)?;
    if res > 1e-10 {
        return Err(CmvError::InvalidSolution(res));
    }
    let g = green_matrix(w, z)?;
    let t = tilde_boundary_values(w, z, psi, form)?;
    let mut worst: f64 = 0.0;
    for n in w.a() + 1..w.b() {
        let pred = g.at(n, w.a()) * t.at_a + g.at(n, w.b()) * t.at_b;
        worst = worst.max((psi_at(w, psi, n) - pred).norm());
    }
    Ok(worst)
}
