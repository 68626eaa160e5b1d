//! Small linear-algebra helpers: a fixed 2×2 complex matrix type for the
//! cocycle, plus thin wrappers over faer for the dense window computations.

use std::ops::Mul;

use faer::Mat;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [m[0][0].into(), m[0][1].into()],
            [m[1][0].into(), m[1][1].into()],
        ])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Largest singular value, from the closed form
    /// σ² = (F² + √(F⁴ − 4|det|²)) / 2.
    pub fn spectral_norm(&self) -> f64 {
        let f2 = self.frobenius_sq();
        let d2 = self.det().norm_sqr();
        let disc = (f2 * f2 - 4.0 * d2).max(0.0).sqrt();
        ((f2 + disc) * 0.5).sqrt()
    }

    /// Both singular values, largest first.
    pub fn singular_values(&self) -> (f64, f64) {
        let smax = self.spectral_norm();
        let d = self.det().norm();
        let smin = if smax > 0.0 { d / smax } else { 0.0 };
        (smax, smin)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut out: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                out = out.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Principal square root with the argument taken in [0, 2π):
/// √z = |z|^{1/2} e^{iθ/2}, so √(−1) = i.
pub fn principal_sqrt(z: C64) -> C64 {
    let mut theta = z.arg();
    if theta < 0.0 {
        theta += std::f64::consts::TAU;
    }
    C64::from_polar(z.norm().sqrt(), 0.5 * theta)
}

/// Pairwise (cascade) summation in a fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Mean and unbiased sample standard deviation.
pub fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, (pairwise_sum(&dev) / (n - 1) as f64).sqrt())
}

/// Ordinary least-squares line `y ≈ slope·x + intercept`, with the
/// coefficient of determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = pairwise_sum(xs) / n as f64;
    let my = pairwise_sum(ys) / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Some(LineFit {
        slope,
        intercept,
        r2,
    })
}

pub fn identity(n: usize) -> Mat<C64> {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

/// `A*` (conjugate transpose) as an owned matrix.
pub fn adjoint(a: &Mat<C64>) -> Mat<C64> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn matmul(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    a * b
}

pub fn max_abs(a: &Mat<C64>) -> f64 {
    let mut out: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max(a[(i, j)].norm());
        }
    }
    out
}

/// max |A − B| entrywise.
pub fn max_abs_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(a.ncols(), b.ncols());
    let mut out: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    out
}

/// ‖A*A − I‖_max.
pub fn unitarity_defect(a: &Mat<C64>) -> f64 {
    let n = a.nrows();
    let prod = adjoint(a) * a;
    max_abs_diff(&prod, &identity(n))
}

/// ‖AA* − I‖_max.
pub fn co_unitarity_defect(a: &Mat<C64>) -> f64 {
    let n = a.nrows();
    let prod = a * adjoint(a);
    max_abs_diff(&prod, &identity(n))
}

pub fn determinant(a: &Mat<C64>) -> C64 {
    if a.nrows() == 0 {
        return ONE;
    }
    a.determinant()
}

/// `zI − A`.
pub fn shifted(a: &Mat<C64>, z: C64) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        if i == j {
            z - a[(i, j)]
        } else {
            -a[(i, j)]
        }
    })
}

pub fn inverse(a: &Mat<C64>) -> Mat<C64> {
    use faer::linalg::solvers::DenseSolveCore;
    a.partial_piv_lu().inverse()
}

/// Singular values, largest first.
pub fn singular_values(a: &Mat<C64>) -> Option<Vec<f64>> {
    let mut s = a.singular_values().ok()?;
    s.sort_by(|x, y| y.total_cmp(x));
    Some(s)
}

pub fn eigenvalues(a: &Mat<C64>) -> Option<Vec<C64>> {
    a.eigenvalues().ok()
}

/// Eigenvalues with right eigenvectors (columns).
pub fn eigen(a: &Mat<C64>) -> Option<(Vec<C64>, Mat<C64>)> {
    let evd = a.eigen().ok()?;
    let s = evd.S();
    let vals: Vec<C64> = (0..a.nrows()).map(|i| s.column_vector()[i]).collect();
    let u = evd.U().to_owned();
    Some((vals, u))
}
