//! Window spectra and eigenvector decay diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cmv::{assemble_window, BoundaryPair, CmvWindow};
use crate::error::{CmvError, Result};
use crate::linalg::{self, fit_line, C64};
use crate::lyapunov::{estimate_ln, SamplingConfig};
use crate::model::VerblunskyScheme;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub eigenvalue: C64,
    /// Unit 2-norm eigenvector.
    pub vector: Vec<C64>,
    /// `‖Ev − λv‖₂`.
    pub residual: f64,
}

fn angle(z: C64) -> f64 {
    let t = z.arg();
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}

/// All eigenpairs, sorted by argument in `[0, 2π)`.
pub fn window_spectrum(w: &CmvWindow) -> Result<Vec<EigenPair>> {
    let e = w.matrix();
    let n = w.size();
    let tag = || match w.scheme_hash() {
        Some(h) => format!("[{}, {}] scheme {h}", w.a(), w.b()),
        None => format!("[{}, {}]", w.a(), w.b()),
    };
    let (vals, vecs) = linalg::eigen(e).ok_or_else(|| CmvError::Eigensolver(tag()))?;
    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|c| {
            let mut v: Vec<C64> = (0..n).map(|i| vecs[(i, c)]).collect();
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            let lam = vals[c];
            let residual = (0..n)
                .map(|i| {
                    let ev: C64 = (i.saturating_sub(2)..(i + 3).min(n))
                        .map(|j| e[(i, j)] * v[j])
                        .sum();
                    (ev - lam * v[i]).norm_sqr()
                })
                .sum::<f64>()
                .sqrt();
            EigenPair {
                eigenvalue: lam,
                vector: v,
                residual,
            }
        })
        .collect();
    if pairs.iter().any(|p| !p.residual.is_finite()) {
        return Err(CmvError::Eigensolver(tag()));
    }
    pairs.sort_by(|p, q| angle(p.eigenvalue).total_cmp(&angle(q.eigenvalue)));
    Ok(pairs)
}

/// `Σ|v|⁴ / (Σ|v|²)²`.
pub fn inverse_participation_ratio(v: &[C64]) -> f64 {
    let s2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let s4: f64 = v.iter().map(|x| x.norm_sqr() * x.norm_sqr()).sum();
    s4 / (s2 * s2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorFit {
    pub center: usize,
    pub rate: f64,
    pub r2: f64,
    pub ipr: f64,
    /// IPR below `2/size`; rate and r2 are reported as zero.
    pub flat: bool,
}

/// Relative floor below which eigenvector entries are treated as roundoff.
pub const DEFAULT_NOISE_FLOOR: f64 = 1e-12;

/// Fit `log env(n) ≈ c − rate·|n − center|`.
///
/// The envelope at a site is the largest amplitude at that site or farther
/// from the centre on the same side. This covers the block-2 maximum with the
/// outward neighbour, which absorbs the even/odd oscillation, and makes the
/// envelope nonincreasing away from the centre. Only entries above
/// `noise_floor` (relative to the peak) enter the fit.
pub fn decay_fit(v: &[C64], noise_floor: f64) -> Result<EigenvectorFit> {
    let n = v.len();
    if n < 32 {
        return Err(CmvError::InvalidInput(format!(
            "decay fit needs length >= 32 (got {n})"
        )));
    }
    let ipr = inverse_participation_ratio(v);
    let amp: Vec<f64> = v.iter().map(|x| x.norm()).collect();
    let center = amp
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &a)| {
            if a > bv {
                (i, a)
            } else {
                (bi, bv)
            }
        })
        .0;
    if ipr < 2.0 / n as f64 {
        return Ok(EigenvectorFit {
            center,
            rate: 0.0,
            r2: 0.0,
            ipr,
            flat: true,
        });
    }
    let peak = amp[center];
    let mut env: Vec<f64> = amp.iter().map(|a| a / peak).collect();
    for i in (center + 1..n.saturating_sub(1)).rev() {
        env[i] = env[i].max(env[i + 1]);
    }
    for i in 1..center {
        env[i] = env[i].max(env[i - 1]);
    }
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for (i, &e) in env.iter().enumerate() {
        if e > noise_floor {
            xs.push(-(i.abs_diff(center) as f64));
            ys.push(e.ln());
        }
    }
    match fit_line(&xs, &ys) {
        Some(f) => Ok(EigenvectorFit {
            center,
            rate: f.slope,
            r2: f.r2,
            ipr,
            flat: false,
        }),
        None => Ok(EigenvectorFit {
            center,
            rate: 0.0,
            r2: 0.0,
            ipr,
            flat: false,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub rate_factor: f64,
    pub r2_min: f64,
    pub noise_floor: f64,
    /// Scale for the Lyapunov reference; `None` means `size / 4`.
    pub lyapunov_n: Option<usize>,
    pub sampling: SamplingConfig,
    /// Centres within `bulk_margin·size` of either end are edge states.
    pub bulk_margin: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            rate_factor: 0.5,
            r2_min: 0.9,
            noise_floor: DEFAULT_NOISE_FLOOR,
            lyapunov_n: None,
            sampling: SamplingConfig::grid(16),
            bulk_margin: 0.125,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub eigenvalue: C64,
    pub center: usize,
    pub rate: f64,
    pub r2: f64,
    pub ipr: f64,
    pub lyapunov_ref: f64,
    pub localized: bool,
    pub bulk: bool,
}

/// One report per eigenpair of the window `[0, size − 1]`.
pub fn localization_scan(
    s: &VerblunskyScheme,
    size: usize,
    bc: BoundaryPair,
    cfg: &ScanConfig,
) -> Result<Vec<LocalizationReport>> {
    if size < 64 {
        return Err(CmvError::InvalidInput(format!(
            "localization scan needs size >= 64 (got {size})"
        )));
    }
    let w = assemble_window(s, 0, size as i64 - 1, bc)?;
    let pairs = window_spectrum(&w)?;
    let ln = cfg.lyapunov_n.unwrap_or(size / 4).max(1);
    let lo = (cfg.bulk_margin * size as f64).floor() as usize;
    let hi = size - lo;
    pairs
        .par_iter()
        .map(|p| {
            let fit = decay_fit(&p.vector, cfg.noise_floor)?;
            let lyapunov_ref = estimate_ln(s, p.eigenvalue, ln, &cfg.sampling)?.mean;
            let localized =
                !fit.flat && fit.rate >= cfg.rate_factor * lyapunov_ref && fit.r2 >= cfg.r2_min;
            Ok(LocalizationReport {
                eigenvalue: p.eigenvalue,
                center: fit.center,
                rate: fit.rate,
                r2: fit.r2,
                ipr: fit.ipr,
                lyapunov_ref,
                localized,
                bulk: (lo..hi).contains(&fit.center),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub total: usize,
    pub bulk: usize,
    pub bulk_localized: usize,
    pub localized: usize,
}

impl ScanSummary {
    pub fn of(reports: &[LocalizationReport]) -> Self {
        ScanSummary {
            total: reports.len(),
            bulk: reports.iter().filter(|r| r.bulk).count(),
            bulk_localized: reports.iter().filter(|r| r.bulk && r.localized).count(),
            localized: reports.iter().filter(|r| r.localized).count(),
        }
    }

    pub fn bulk_fraction(&self) -> f64 {
        if self.bulk == 0 {
            0.0
        } else {
            self.bulk_localized as f64 / self.bulk as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftRow {
    pub size: usize,
    pub median_rate: f64,
    pub median_ipr_size: f64,
    pub bulk_localized_fraction: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

pub fn finite_size_drift(
    s: &VerblunskyScheme,
    sizes: &[usize],
    bc: BoundaryPair,
    cfg: &ScanConfig,
) -> Result<Vec<DriftRow>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CmvError::InvalidInput(
            "sizes must be strictly ascending".into(),
        ));
    }
    sizes
        .iter()
        .map(|&size| {
            let reports = localization_scan(s, size, bc, cfg)?;
            let bulk: Vec<&LocalizationReport> = reports.iter().filter(|r| r.bulk).collect();
            Ok(DriftRow {
                size,
                median_rate: median(bulk.iter().map(|r| r.rate).collect()),
                median_ipr_size: median(bulk.iter().map(|r| r.ipr * size as f64).collect()),
                bulk_localized_fraction: ScanSummary::of(&reports).bulk_fraction(),
            })
        })
        .collect()
}
