//! Szegő cocycle, renormalized transfer products and related identities.

use serde::{Deserialize, Serialize};

use crate::cmv::CmvWindow;
use crate::error::{CmvError, Result};
use crate::linalg::{self, principal_sqrt, Mat2, C64, ONE};
use crate::model::{rho, Phase, VerblunskyScheme};

/// Default strip widths `(h₁, h₂)` for the analytic extension of the sampler.
pub const DEFAULT_STRIP: (f64, f64) = (0.5, 0.5);

/// A determinant-one Szegő matrix `M^z(α)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CocycleMatrix(pub Mat2);

/// `M^z = ρ^{-1} [[√z, −ᾱ/√z], [−α√z, 1/√z]]` with the principal root.
pub fn szego_matrix(alpha: C64, z: C64) -> Result<CocycleMatrix> {
    szego_with_root(alpha, principal_sqrt(z))
}

/// Same as [`szego_matrix`] with the square root of `z` supplied.
pub fn szego_with_root(alpha: C64, root: C64) -> Result<CocycleMatrix> {
    let m = alpha.norm();
    if !(m < 1.0) {
        return Err(CmvError::InvalidCoefficient {
            modulus: m,
            requirement: "< 1",
        });
    }
    Ok(CocycleMatrix(szego_unchecked(alpha, root)))
}

#[inline]
fn szego_unchecked(alpha: C64, root: C64) -> Mat2 {
    let inv_root = root.inv();
    let s = 1.0 / rho(alpha);
    Mat2::new(
        root * s,
        -alpha.conj() * inv_root * s,
        -alpha * root * s,
        inv_root * s,
    )
}

/// A product stored as `e^{log_scale}·B` with `‖B‖₂ = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactoredProduct {
    pub b: Mat2,
    pub log_scale: f64,
    /// Determinant of the full product, accumulated factor by factor. The
    /// entrywise `det(B)` carries no significant digits once the product is
    /// strongly hyperbolic.
    pub det: C64,
}

impl FactoredProduct {
    pub fn identity() -> Self {
        FactoredProduct {
            b: Mat2::IDENTITY,
            log_scale: 0.0,
            det: ONE,
        }
    }

    pub fn from_matrix(m: Mat2) -> Self {
        let mut p = FactoredProduct {
            b: m,
            log_scale: 0.0,
            det: m.det(),
        };
        p.renormalize();
        p
    }

    fn renormalize(&mut self) {
        let s = self.b.spectral_norm();
        self.b = self.b.scale_real(1.0 / s);
        self.log_scale += s.ln();
    }

    /// `self ← m · self`.
    pub fn push(&mut self, m: &Mat2) {
        self.b = *m * self.b;
        self.det *= m.det();
        self.renormalize();
    }

    /// `later · earlier`, i.e. the product over the concatenated ranges.
    pub fn compose(later: &FactoredProduct, earlier: &FactoredProduct) -> FactoredProduct {
        let mut p = FactoredProduct {
            b: later.b * earlier.b,
            log_scale: later.log_scale + earlier.log_scale,
            det: later.det * earlier.det,
        };
        p.renormalize();
        p
    }

    /// `log ‖e^{log_scale} B‖₂`.
    pub fn log_norm(&self) -> f64 {
        self.log_scale + self.b.spectral_norm().ln()
    }

    /// The product as a plain matrix (may overflow for long products).
    pub fn matrix(&self) -> Mat2 {
        self.b.scale_real(self.log_scale.exp())
    }

    /// `|det − 1|` for the accumulated determinant.
    pub fn det_defect(&self) -> f64 {
        (self.det - ONE).norm()
    }

    /// `|det(B)·e^{2·log_scale} − 1|` from the entries of `B`. Only
    /// meaningful while `e^{−2·log_scale}` is well above machine epsilon.
    pub fn entrywise_det_defect(&self) -> f64 {
        let d = self.b.det();
        let full = C64::from_polar((d.norm().ln() + 2.0 * self.log_scale).exp(), d.arg());
        (full - ONE).norm()
    }

    /// Relative distance to another product, up to a global sign.
    pub fn rel_diff_up_to_sign(&self, other: &FactoredProduct) -> f64 {
        let scale = (other.log_scale - self.log_scale).exp();
        let o = other.b.scale_real(scale);
        let plus = self.b.max_abs_diff(&o);
        let minus = self.b.max_abs_diff(&o.scale_real(-1.0));
        plus.min(minus) / self.b.max_abs()
    }
}

/// `M_n^z = M^z(T^{n−1}p) ⋯ M^z(p)` from the scheme's base phase.
pub fn transfer_product(s: &VerblunskyScheme, n: usize, z: C64) -> FactoredProduct {
    transfer_product_at(s, s.base(), n, z)
}

/// [`transfer_product`] from an arbitrary phase.
pub fn transfer_product_at(
    s: &VerblunskyScheme,
    phase: Phase,
    n: usize,
    z: C64,
) -> FactoredProduct {
    transfer_product_with_root(s, phase, 0, n, principal_sqrt(z))
}

/// Product of the factors with indices `start .. start + n` from `phase`,
/// using the supplied `√z`.
pub fn transfer_product_with_root(
    s: &VerblunskyScheme,
    phase: Phase,
    start: i64,
    n: usize,
    root: C64,
) -> FactoredProduct {
    let mut p = FactoredProduct::identity();
    for j in 0..n as i64 {
        let alpha = s.coefficient_at(phase, start + j);
        p.push(&szego_unchecked(alpha, root));
    }
    p
}

/// Real conjugate `A = Q* M Q` of a cocycle matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealConjugate {
    pub a: [[f64; 2]; 2],
    pub imag_residual: f64,
}

impl RealConjugate {
    pub fn as_mat2(&self) -> Mat2 {
        Mat2::from_real(self.a)
    }
}

/// `Q = −(1 + i)^{-1} [[1, −i], [1, i]]`.
pub fn q_matrix() -> Mat2 {
    let c = -(C64::new(1.0, 1.0)).inv();
    let i = C64::new(0.0, 1.0);
    Mat2::new(ONE, -i, ONE, i).scale(c)
}

pub fn sl2r_conjugate(m: &CocycleMatrix) -> Result<RealConjugate> {
    let q = q_matrix();
    let a = q.adjoint() * m.0 * q;
    let imag_residual = a.0.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag_residual >= 1e-6 {
        return Err(CmvError::ConjugationFailure(imag_residual));
    }
    Ok(RealConjugate {
        a: [[a.0[0][0].re, a.0[0][1].re], [a.0[1][0].re, a.0[1][1].re]],
        imag_residual,
    })
}

/// `P(z) = log(sup 1/ρ + C_α + (1 − λ²)^{-1} + |z|)`, clamped below at 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFactor {
    pub value: f64,
    pub sup_inv_rho: f64,
    pub c_alpha: f64,
    pub coupling_term: f64,
    pub z_abs: f64,
}

pub fn scaling_p(s: &VerblunskyScheme, z: C64) -> ScalingFactor {
    scaling_p_with_strip(s, z, DEFAULT_STRIP.0, DEFAULT_STRIP.1)
}

pub fn scaling_p_with_strip(s: &VerblunskyScheme, z: C64, h1: f64, h2: f64) -> ScalingFactor {
    let lam = s.lambda();
    let sup = s.sup_certificate().grid;
    let sup_inv_rho = 1.0 / (1.0 - lam * lam * sup * sup).sqrt();
    let c_alpha = s.sampler().strip_norm(h1, h2);
    let coupling_term = 1.0 / (1.0 - lam * lam);
    let z_abs = z.norm();
    let value = (sup_inv_rho + c_alpha + coupling_term + z_abs)
        .ln()
        .max(1.0);
    ScalingFactor {
        value,
        sup_inv_rho,
        c_alpha,
        coupling_term,
        z_abs,
    }
}

/// `M_n` assembled from characteristic polynomials of the unmodified windows
/// `[1, n−1]` and `[0, n−1]` (the latter with `α_{−1} = −1`).
pub fn transfer_via_determinants(s: &VerblunskyScheme, n: usize, z: C64) -> Result<Mat2> {
    if n < 2 {
        return Err(CmvError::InvalidInput(format!(
            "determinant form needs n >= 2 (got {n})"
        )));
    }
    let ni = n as i64;
    let alpha_m1 = -ONE;
    let inner = CmvWindow::from_coefficients(1, s.coefficients(0, ni - 1), None, None)?;
    let outer = CmvWindow::from_coefficients(0, s.coefficients(-1, ni - 1), Some(alpha_m1), None)?;

    let p1 = |w: C64| linalg::determinant(&linalg::shifted(inner.matrix(), w));
    let p0 = |w: C64| linalg::determinant(&linalg::shifted(outer.matrix(), w));
    let off = |w: C64| (w * p1(w) - p0(w)) / alpha_m1;
    let deg = (n - 1) as i32;
    let star = |f: &dyn Fn(C64) -> C64| z.powi(deg) * f(z.conj().inv()).conj();

    let inv_rho: f64 = (0..ni).map(|j| 1.0 / rho(s.alpha(j))).product();
    let pref = principal_sqrt(z).powi(-(n as i32)) * inv_rho;
    let m = Mat2::new(z * p1(z), off(z), z * star(&off), star(&p1));
    Ok(m.scale(pref))
}
