//! Finite-scale Lyapunov exponents and the statistics built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cocycle::{scaling_p, transfer_product_with_root, FactoredProduct};
use crate::error::{CmvError, Result};
use crate::linalg::{self, fit_line, mean_and_std, pairwise_sum, principal_sqrt, Mat2, C64};
use crate::model::{Phase, VerblunskyScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SamplingMode {
    /// Cell centres of a `side × side` grid.
    Grid {
        side: usize,
    },
    MonteCarlo {
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    #[serde(flatten)]
    pub mode: SamplingMode,
    #[serde(default)]
    pub seed: u64,
}

impl SamplingConfig {
    pub fn grid(side: usize) -> Self {
        SamplingConfig {
            mode: SamplingMode::Grid { side },
            seed: 0,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        SamplingConfig {
            mode: SamplingMode::MonteCarlo { samples },
            seed,
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.mode, SamplingMode::Grid { .. })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SamplingConfig { seed, ..self }
    }

    pub fn phases(&self) -> Vec<Phase> {
        match self.mode {
            SamplingMode::Grid { side } => {
                let h = 1.0 / side as f64;
                (0..side * side)
                    .map(|k| {
                        Phase::new(((k / side) as f64 + 0.5) * h, ((k % side) as f64 + 0.5) * h)
                    })
                    .collect()
            }
            SamplingMode::MonteCarlo { samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..samples)
                    .map(|_| Phase::new(rng.random(), rng.random()))
                    .collect()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let count = match self.mode {
            SamplingMode::Grid { side } => side,
            SamplingMode::MonteCarlo { samples } => samples,
        };
        if count == 0 {
            return Err(CmvError::InvalidInput(
                "sampling needs at least one phase".into(),
            ));
        }
        Ok(())
    }
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig::grid(32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub n: usize,
    pub z: C64,
    pub mean: f64,
    /// Standard error of the mean; zero for grid quadrature.
    pub std_error: f64,
    /// Sample standard deviation of `u_n` over the phases.
    pub sample_std: f64,
    pub samples: usize,
    pub grid: bool,
}

/// `u_n(p) = (1/n) log ‖M_n^z(p)‖` for each phase, in input order.
pub fn u_values(s: &VerblunskyScheme, z: C64, n: usize, phases: &[Phase]) -> Vec<f64> {
    let root = principal_sqrt(z);
    let inv_n = 1.0 / n as f64;
    phases
        .par_iter()
        .map(|&p| transfer_product_with_root(s, p, 0, n, root).log_scale * inv_n)
        .collect()
}

/// Phase average of `u_n`; the scheme's own base phase is ignored.
pub fn estimate_ln(
    s: &VerblunskyScheme,
    z: C64,
    n: usize,
    cfg: &SamplingConfig,
) -> Result<LyapunovEstimate> {
    if n == 0 {
        return Err(CmvError::InvalidInput("scale n must be >= 1".into()));
    }
    cfg.validate()?;
    let u = u_values(s, z, n, &cfg.phases());
    Ok(summarize(n, z, &u, cfg.is_grid()))
}

fn summarize(n: usize, z: C64, u: &[f64], grid: bool) -> LyapunovEstimate {
    let (mean, sd) = mean_and_std(u);
    let std_error = if grid {
        0.0
    } else {
        sd / (u.len() as f64).sqrt()
    };
    LyapunovEstimate {
        n,
        z,
        mean,
        std_error,
        sample_std: sd,
        samples: u.len(),
        grid,
    }
}

/// `L_n` computed from the real conjugates `A = Q* M Q` of each factor.
pub fn estimate_ln_conjugated(
    s: &VerblunskyScheme,
    z: C64,
    n: usize,
    cfg: &SamplingConfig,
) -> Result<LyapunovEstimate> {
    if n == 0 {
        return Err(CmvError::InvalidInput("scale n must be >= 1".into()));
    }
    cfg.validate()?;
    let root = principal_sqrt(z);
    let q = crate::cocycle::q_matrix();
    let qa = q.adjoint();
    let u: Vec<f64> = cfg
        .phases()
        .par_iter()
        .map(|&p| {
            let mut prod = FactoredProduct::identity();
            for j in 0..n as i64 {
                let m = transfer_product_with_root(s, p, j, 1, root).matrix();
                let a = qa * m * q;
                let real =
                    Mat2::from_real([[a.0[0][0].re, a.0[0][1].re], [a.0[1][0].re, a.0[1][1].re]]);
                prod.push(&real);
            }
            prod.log_scale / n as f64
        })
        .collect();
    Ok(summarize(n, z, &u, cfg.is_grid()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationProfile {
    pub n: usize,
    pub z: C64,
    pub mean: f64,
    pub thresholds: Vec<f64>,
    /// Fraction of phases with `|u_n − mean| > t`, one per threshold.
    pub empirical_measure: Vec<f64>,
}

pub fn deviation_profile(
    s: &VerblunskyScheme,
    z: C64,
    n: usize,
    thresholds: &[f64],
    cfg: &SamplingConfig,
) -> Result<DeviationProfile> {
    if n == 0 {
        return Err(CmvError::InvalidInput("scale n must be >= 1".into()));
    }
    if thresholds.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(CmvError::InvalidInput(
            "thresholds must be sorted ascending".into(),
        ));
    }
    cfg.validate()?;
    let u = u_values(s, z, n, &cfg.phases());
    let mean = pairwise_sum(&u) / u.len() as f64;
    let mut dev: Vec<f64> = u.iter().map(|v| (v - mean).abs()).collect();
    dev.sort_by(f64::total_cmp);
    let total = dev.len() as f64;
    let empirical_measure = thresholds
        .iter()
        .map(|&t| {
            let at_most = dev.partition_point(|&d| d <= t);
            (dev.len() - at_most) as f64 / total
        })
        .collect();
    Ok(DeviationProfile {
        n,
        z,
        mean,
        thresholds: thresholds.to_vec(),
        empirical_measure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvalancheReport {
    pub n: usize,
    pub residual: f64,
    /// `min_j ‖A_j‖`, the largest admissible μ.
    pub mu_floor: f64,
    pub n_over_mu: f64,
    /// `max_j [log‖A_{j+1}‖ + log‖A_j‖ − log‖A_{j+1}A_j‖]`.
    pub max_gap: f64,
    pub hypothesis_ok: bool,
}

/// Both sides of the avalanche principle for `A_1, …, A_n` (given in that
/// order, `A_1` first).
pub fn avalanche_residual(mats: &[Mat2]) -> Result<AvalancheReport> {
    let n = mats.len();
    if n < 3 {
        return Err(CmvError::InvalidInput(format!(
            "avalanche needs n >= 3 matrices (got {n})"
        )));
    }
    let mut prod = FactoredProduct::identity();
    for m in mats {
        prod.push(m);
    }
    let norms: Vec<f64> = mats.iter().map(|m| m.spectral_norm().ln()).collect();
    let pairs: Vec<f64> = mats
        .windows(2)
        .map(|w| (w[1] * w[0]).spectral_norm().ln())
        .collect();
    let residual = prod.log_norm() + pairwise_sum(&norms[1..n - 1]) - pairwise_sum(&pairs);
    let max_gap = (0..n - 1)
        .map(|j| norms[j + 1] + norms[j] - pairs[j])
        .fold(f64::NEG_INFINITY, f64::max);
    let mu_floor = norms.iter().copied().fold(f64::INFINITY, f64::min).exp();
    let hypothesis_ok = mu_floor >= n as f64 && max_gap <= 0.5 * mu_floor.ln();
    Ok(AvalancheReport {
        n,
        residual: residual.abs(),
        mu_floor,
        n_over_mu: n as f64 / mu_floor,
        max_gap,
        hypothesis_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiscaleReport {
    pub n: usize,
    pub big_n: usize,
    pub l_n: LyapunovEstimate,
    pub l_2n: LyapunovEstimate,
    pub l_big: LyapunovEstimate,
    /// `|L̂_N + L̂_n − 2L̂_{2n}|`.
    pub residual: f64,
    /// Standard error of the residual, treating the three estimates as
    /// independent.
    pub noise: f64,
    pub p: f64,
    /// `P(z)·n/N`.
    pub scale: f64,
}

pub fn multiscale_residual(
    s: &VerblunskyScheme,
    z: C64,
    n: usize,
    big_n: usize,
    cfg: &SamplingConfig,
) -> Result<MultiscaleReport> {
    if n == 0 || big_n < n * n {
        return Err(CmvError::InvalidInput(format!(
            "multiscale needs N >= n^2 (n = {n}, N = {big_n})"
        )));
    }
    let l_n = estimate_ln(s, z, n, cfg)?;
    let l_2n = estimate_ln(s, z, 2 * n, cfg)?;
    let l_big = estimate_ln(s, z, big_n, cfg)?;
    let residual = (l_big.mean + l_n.mean - 2.0 * l_2n.mean).abs();
    let noise =
        (l_big.std_error.powi(2) + l_n.std_error.powi(2) + 4.0 * l_2n.std_error.powi(2)).sqrt();
    let p = scaling_p(s, z).value;
    Ok(MultiscaleReport {
        n,
        big_n,
        l_n,
        l_2n,
        l_big,
        residual,
        noise,
        p,
        scale: p * n as f64 / big_n as f64,
    })
}

/// `−¼ log(1 − λ²)`.
pub fn positivity_bound(lambda: f64) -> f64 {
    -0.25 * (1.0 - lambda * lambda).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub estimate: LyapunovEstimate,
    pub bound: f64,
    pub margin: f64,
}

pub fn positivity_margin(
    s: &VerblunskyScheme,
    z: C64,
    n: usize,
    cfg: &SamplingConfig,
) -> Result<PositivityReport> {
    let estimate = estimate_ln(s, z, n, cfg)?;
    let bound = positivity_bound(s.lambda());
    Ok(PositivityReport {
        estimate,
        bound,
        margin: estimate.mean - bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformBoundReport {
    pub max_over_grid: f64,
    pub l_n0: f64,
    /// `L̂_{N₀} + N₀^{−σ₀}`.
    pub reference: f64,
    pub holds: bool,
}

/// Compares `max_{grid} u_N` with `L̂_{N₀} + N₀^{−σ₀}`; the grid is the
/// `phase_grid × phase_grid` cell-centre grid.
pub fn uniform_bound_check(
    s: &VerblunskyScheme,
    z: C64,
    n0: usize,
    n: usize,
    phase_grid: usize,
    sigma0: f64,
    cfg: &SamplingConfig,
) -> Result<UniformBoundReport> {
    if n <= n0 || n0 == 0 {
        return Err(CmvError::InvalidInput(format!(
            "uniform bound needs N > N0 >= 1 (N0 = {n0}, N = {n})"
        )));
    }
    let phases = SamplingConfig::grid(phase_grid).phases();
    let u = u_values(s, z, n, &phases);
    let max_over_grid = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l_n0 = estimate_ln(s, z, n0, cfg)?.mean;
    let reference = l_n0 + (n0 as f64).powf(-sigma0);
    Ok(UniformBoundReport {
        max_over_grid,
        l_n0,
        reference,
        holds: max_over_grid < reference,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    /// Fitted `L = lim L_n`.
    pub limit: f64,
    /// Fitted `C` in `L_n ≈ L + C/n`.
    pub c: f64,
}

/// Least-squares fit of `L_n = L + C/n` through at least two scales.
pub fn extrapolate(estimates: &[LyapunovEstimate]) -> Result<Extrapolation> {
    let xs: Vec<f64> = estimates.iter().map(|e| 1.0 / e.n as f64).collect();
    let ys: Vec<f64> = estimates.iter().map(|e| e.mean).collect();
    let fit = fit_line(&xs, &ys)
        .ok_or_else(|| CmvError::InvalidInput("extrapolation needs two distinct scales".into()))?;
    Ok(Extrapolation {
        limit: fit.intercept,
        c: fit.slope,
    })
}

/// Log-norms `log‖M^z(T^j p)‖` of the individual factors.
pub fn factor_log_norms(s: &VerblunskyScheme, p: Phase, n: usize, z: C64) -> Vec<f64> {
    let root = principal_sqrt(z);
    (0..n as i64)
        .map(|j| transfer_product_with_root(s, p, j, 1, root).log_scale)
        .collect()
}

/// Random `A_j = R(θ_j) diag(μ_j, 1/μ_j) R(φ_j)` with `μ_j ∈ [μ, 2μ]`.
///
/// Each new factor is redrawn until its pair gap with the previous one is at
/// most `½ log μ`, so the sequence meets the avalanche hypotheses whenever
/// `μ ≥ n`.
pub fn random_hyperbolic_sequence<R: Rng + ?Sized>(rng: &mut R, n: usize, mu: f64) -> Vec<Mat2> {
    let rot = |t: f64| Mat2::from_real([[t.cos(), -t.sin()], [t.sin(), t.cos()]]);
    let draw = |rng: &mut R| {
        let m = mu * rng.random_range(1.0..2.0);
        let d = Mat2::from_real([[m, 0.0], [0.0, 1.0 / m]]);
        rot(rng.random_range(0.0..std::f64::consts::TAU))
            * d
            * rot(rng.random_range(0.0..std::f64::consts::TAU))
    };
    let gap = |next: &Mat2, prev: &Mat2| {
        next.spectral_norm().ln() + prev.spectral_norm().ln() - (*next * *prev).spectral_norm().ln()
    };
    let mut out: Vec<Mat2> = Vec::with_capacity(n);
    while out.len() < n {
        let cand = draw(rng);
        match out.last() {
            Some(prev) if gap(&cand, prev) > 0.5 * mu.ln() => continue,
            _ => out.push(cand),
        }
    }
    out
}

/// Max `|det A − 1|` over a sequence, for input validation by callers.
pub fn max_det_defect(mats: &[Mat2]) -> f64 {
    mats.iter()
        .map(|m| (m.det() - linalg::ONE).norm())
        .fold(0.0, f64::max)
}
