use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::cmv::{assemble_window, BoundaryPair, CmvWindow};
use crate::cocycle::{scaling_p, transfer_product, transfer_via_determinants};
use crate::error::CmvError;
use crate::green::{
    davis_simon_gap, green_entry_via_polys, green_matrix, restriction_residual, solve_extended,
};
use crate::linalg::{self, C64};
use crate::localization::{localization_scan, window_spectrum, ScanConfig, ScanSummary};
use crate::lyapunov::{
    avalanche_residual, deviation_profile, estimate_ln, multiscale_residual, positivity_margin,
    random_hyperbolic_sequence, uniform_bound_check,
};
use crate::model::random::{random_scheme, random_unimodular};
use crate::model::{diophantine_margin, Frequency, VerblunskyScheme};

use super::config::{ConfigError, ExperimentConfig, Task};
use super::output::{Table, TaskOutput};

/// Tolerance for the oracle batteries.
pub const ORACLE_TOL: f64 = 1e-8;

fn scheme(cfg: &ExperimentConfig) -> Result<VerblunskyScheme, ConfigError> {
    cfg.scheme
        .build()
        .map_err(|e| ConfigError::at("scheme", e.to_string()))
}

fn positive(path: &str, v: usize) -> Result<usize, ConfigError> {
    if v == 0 {
        Err(ConfigError::at(path, "must be >= 1"))
    } else {
        Ok(v)
    }
}

fn boundary(cfg: &ExperimentConfig) -> BoundaryPair {
    cfg.params.boundary.map(|b| b.pair()).unwrap_or_default()
}

/// Independent seed for instance `i` of a battery.
fn instance_rng(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(super::mix_seed(seed, i as u64))
}

pub fn run_task(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    match cfg.task {
        Task::Lyapunov => lyapunov(cfg),
        Task::Ldt => ldt(cfg),
        Task::Avalanche => avalanche(cfg),
        Task::Multiscale => multiscale(cfg),
        Task::Positivity => positivity(cfg),
        Task::UniformBound => uniform_bound(cfg),
        Task::GreenCheck => green_check(cfg),
        Task::DavisSimon => davis_simon(cfg),
        Task::RestrictionCheck => restriction_check(cfg),
        Task::Spectrum => spectrum(cfg),
        Task::Localize => localize(cfg),
        Task::DioCheck => dio_check(cfg),
        Task::DetformCheck => detform_check(cfg),
    }
}

fn numeric(e: CmvError) -> ConfigError {
    ConfigError::at("params", e.to_string())
}

fn lyapunov(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let n = positive("params.n", cfg.params.n.unwrap_or(100))?;
    let mut table = Table::new(&["n", "z_re", "z_im", "mean", "stderr", "samples", "seed"]);
    let mut failures = Vec::new();
    for z in cfg.z_values() {
        match estimate_ln(&s, z, n, &cfg.sampling) {
            Ok(e) => table.push(vec![
                json!(n),
                json!(z.re),
                json!(z.im),
                json!(e.mean),
                json!(e.std_error),
                json!(e.samples),
                json!(cfg.sampling.seed),
            ]),
            Err(e) => failures.push(format!("z = {z}: {e}")),
        }
    }
    let summary = match table.rows.first() {
        Some(r) => format!("L_{n} at z = {}+{}i: {}", r[1], r[2], r[3]),
        None => "no estimates".into(),
    };
    Ok(TaskOutput {
        table,
        summary,
        failures,
    })
}

fn ldt(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let ns = cfg
        .params
        .ns
        .clone()
        .unwrap_or_else(|| vec![cfg.params.n.unwrap_or(20)]);
    for &n in &ns {
        positive("params.ns", n)?;
    }
    let mut table = Table::new(&[
        "n",
        "z_re",
        "z_im",
        "threshold",
        "measure",
        "mean",
        "samples",
        "seed",
    ]);
    let samples = match cfg.sampling.mode {
        crate::lyapunov::SamplingMode::Grid { side } => side * side,
        crate::lyapunov::SamplingMode::MonteCarlo { samples } => samples,
    };
    for z in cfg.z_values() {
        let p = scaling_p(&s, z).value;
        let thresholds = match (&cfg.params.thresholds, &cfg.params.threshold_p_fractions) {
            (Some(t), _) => t.clone(),
            (None, Some(f)) => f.iter().map(|f| f * p).collect(),
            (None, None) => vec![0.1 * p],
        };
        for &n in &ns {
            let prof = deviation_profile(&s, z, n, &thresholds, &cfg.sampling)
                .map_err(|e| ConfigError::at("params.thresholds", e.to_string()))?;
            for (t, m) in prof.thresholds.iter().zip(&prof.empirical_measure) {
                table.push(vec![
                    json!(n),
                    json!(z.re),
                    json!(z.im),
                    json!(t),
                    json!(m),
                    json!(prof.mean),
                    json!(samples),
                    json!(cfg.sampling.seed),
                ]);
            }
        }
    }
    let summary = format!("{} deviation rows over n = {:?}", table.rows.len(), ns);
    Ok(TaskOutput {
        table,
        summary,
        failures: Vec::new(),
    })
}

fn avalanche(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let instances = cfg.params.instances.unwrap_or(50);
    let n = cfg.params.n.unwrap_or(50);
    if n < 3 {
        return Err(ConfigError::at("params.n", "avalanche needs n >= 3"));
    }
    let mu = cfg.params.mu.unwrap_or(1e4);
    if !(mu >= 1.0) {
        return Err(ConfigError::at("params.mu", "must be >= 1"));
    }
    let c_max = 10.0;
    let rows: Vec<_> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            let mats = random_hyperbolic_sequence(&mut rng, n, mu);
            let r = avalanche_residual(&mats).expect("n >= 3");
            (i, r)
        })
        .collect();
    let mut table = Table::new(&[
        "instance",
        "n",
        "mu_floor",
        "residual",
        "n_over_mu",
        "c_fit",
        "hypothesis_ok",
    ]);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, r) in rows {
        let c_fit = r.residual / r.n_over_mu;
        if r.hypothesis_ok {
            worst = worst.max(c_fit);
            if c_fit > c_max {
                failures.push(format!("instance {i}: fitted C = {c_fit} > {c_max}"));
            }
        }
        table.push(vec![
            json!(i),
            json!(r.n),
            json!(r.mu_floor),
            json!(r.residual),
            json!(r.n_over_mu),
            json!(c_fit),
            json!(r.hypothesis_ok),
        ]);
    }
    Ok(TaskOutput {
        table,
        summary: format!("{instances} sequences, max fitted C = {worst:.3e}"),
        failures,
    })
}

fn multiscale(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let n = positive("params.n", cfg.params.n.unwrap_or(10))?;
    let big_n = cfg.params.big_n.unwrap_or(n * n);
    if big_n < n * n {
        return Err(ConfigError::at("params.big_n", "must satisfy N >= n^2"));
    }
    let mut table = Table::new(&[
        "n", "big_n", "z_re", "z_im", "l_n", "l_2n", "l_big", "residual", "noise", "p", "bound",
        "holds",
    ]);
    for z in cfg.z_values() {
        let r = multiscale_residual(&s, z, n, big_n, &cfg.sampling).map_err(numeric)?;
        let bound = 5.0 * r.scale;
        table.push(vec![
            json!(n),
            json!(big_n),
            json!(z.re),
            json!(z.im),
            json!(r.l_n.mean),
            json!(r.l_2n.mean),
            json!(r.l_big.mean),
            json!(r.residual),
            json!(r.noise),
            json!(r.p),
            json!(bound),
            json!(r.residual <= bound),
        ]);
    }
    let summary = format!(
        "multiscale residual at (n, N) = ({n}, {big_n}): {}",
        table.rows[0][7]
    );
    Ok(TaskOutput {
        table,
        summary,
        failures: Vec::new(),
    })
}

fn positivity(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let n = positive("params.n", cfg.params.n.unwrap_or(200))?;
    let mut table = Table::new(&["n", "z_re", "z_im", "estimate", "stderr", "bound", "margin"]);
    for z in cfg.z_values() {
        let r = positivity_margin(&s, z, n, &cfg.sampling).map_err(numeric)?;
        table.push(vec![
            json!(n),
            json!(z.re),
            json!(z.im),
            json!(r.estimate.mean),
            json!(r.estimate.std_error),
            json!(r.bound),
            json!(r.margin),
        ]);
    }
    let summary = format!("L_{n} - bound = {}", table.rows[0][6]);
    Ok(TaskOutput {
        table,
        summary,
        failures: Vec::new(),
    })
}

fn uniform_bound(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let n0 = positive("params.n0", cfg.params.n0.unwrap_or(50))?;
    let n = cfg.params.n.unwrap_or(500);
    if n <= n0 {
        return Err(ConfigError::at("params.n", "must exceed params.n0"));
    }
    let grid = positive("params.phase_grid", cfg.params.phase_grid.unwrap_or(64))?;
    let sigma0 = cfg.params.sigma0.unwrap_or(0.5);
    let mut table = Table::new(&[
        "n0",
        "n",
        "z_re",
        "z_im",
        "phase_grid",
        "sigma0",
        "max_over_grid",
        "reference",
        "holds",
    ]);
    for z in cfg.z_values() {
        let r = uniform_bound_check(&s, z, n0, n, grid, sigma0, &cfg.sampling).map_err(numeric)?;
        table.push(vec![
            json!(n0),
            json!(n),
            json!(z.re),
            json!(z.im),
            json!(grid),
            json!(sigma0),
            json!(r.max_over_grid),
            json!(r.reference),
            json!(r.holds),
        ]);
    }
    let summary = format!(
        "sup u_N = {} vs reference {}",
        table.rows[0][6], table.rows[0][7]
    );
    Ok(TaskOutput {
        table,
        summary,
        failures: Vec::new(),
    })
}

/// A random point on the circle at distance at least `min_dist` from the
/// window spectrum.
fn circle_point_off_spectrum(rng: &mut ChaCha8Rng, w: &CmvWindow, min_dist: f64) -> Option<C64> {
    let ev = linalg::eigenvalues(w.matrix())?;
    for _ in 0..1000 {
        let z = random_unimodular(rng);
        if ev.iter().all(|&l| (z - l).norm() >= min_dist) {
            return Some(z);
        }
    }
    None
}

fn battery_table() -> Table {
    Table::new(&[
        "instance",
        "size",
        "a",
        "b",
        "z_re",
        "z_im",
        "value",
        "reference",
        "error",
        "status",
    ])
}

struct BatteryRow {
    instance: usize,
    size: usize,
    a: i64,
    b: i64,
    z: C64,
    value: f64,
    reference: f64,
    error: f64,
    ok: bool,
    note: Option<String>,
}

fn finish_battery(rows: Vec<BatteryRow>) -> TaskOutput {
    let mut table = battery_table();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for r in &rows {
        let status = match (&r.note, r.ok) {
            (Some(n), _) => format!("error: {n}"),
            (None, true) => "ok".into(),
            (None, false) => "fail".into(),
        };
        if !r.ok || r.note.is_some() {
            failures.push(format!(
                "instance {}: {status} (error {:e})",
                r.instance, r.error
            ));
        }
        if r.error.is_finite() {
            worst = worst.max(r.error);
        }
        table.push(vec![
            json!(r.instance),
            json!(r.size),
            json!(r.a),
            json!(r.b),
            json!(r.z.re),
            json!(r.z.im),
            json!(r.value),
            json!(r.reference),
            json!(r.error),
            json!(status),
        ]);
    }
    let summary = format!(
        "{} instances, {} failures, worst error {worst:.3e}",
        rows.len(),
        failures.len()
    );
    TaskOutput {
        table,
        summary,
        failures,
    }
}

fn error_row(instance: usize, note: String) -> BatteryRow {
    BatteryRow {
        instance,
        size: 0,
        a: 0,
        b: 0,
        z: C64::new(f64::NAN, f64::NAN),
        value: f64::NAN,
        reference: f64::NAN,
        error: f64::NAN,
        ok: false,
        note: Some(note),
    }
}

fn green_check(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let instances = cfg.params.instances.unwrap_or(100);
    let form = cfg.params.prefactor.unwrap_or_default();
    let max_size = cfg.params.size.unwrap_or(32).max(1);
    let rows = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            let s = random_scheme(&mut rng, 0.0..0.95);
            let size = rng.random_range(1..=max_size) as i64;
            let a = rng.random_range(-8..8);
            let bc = BoundaryPair::new(random_unimodular(&mut rng), random_unimodular(&mut rng));
            let w = match assemble_window(&s, a, a + size - 1, bc) {
                Ok(w) => w,
                Err(e) => return error_row(i, e.to_string()),
            };
            let Some(z) = circle_point_off_spectrum(&mut rng, &w, 1e-3) else {
                return error_row(i, "no admissible z".into());
            };
            let j = rng.random_range(a..a + size);
            let k = rng.random_range(j..a + size);
            let g = match green_matrix(&w, z) {
                Ok(g) => g,
                Err(e) => return error_row(i, e.to_string()),
            };
            let direct = g.at(j, k).norm();
            match green_entry_via_polys(&w, j, k, z, form) {
                Ok(f) => {
                    let error = (f - direct).abs() / direct;
                    BatteryRow {
                        instance: i,
                        size: size as usize,
                        a: j,
                        b: k,
                        z,
                        value: f,
                        reference: direct,
                        error,
                        ok: error < ORACLE_TOL,
                        note: None,
                    }
                }
                Err(e) => error_row(i, e.to_string()),
            }
        })
        .collect();
    let mut out = finish_battery(rows);
    // columns a, b carry j, k for this battery
    out.table.columns[2] = "j".into();
    out.table.columns[3] = "k".into();
    Ok(out)
}

fn davis_simon(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let instances = cfg.params.instances.unwrap_or(200);
    let max_size = cfg.params.size.unwrap_or(32).max(1);
    let rows = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            let s = random_scheme(&mut rng, 0.0..0.95);
            let size = rng.random_range(1..=max_size) as i64;
            let bc = BoundaryPair::new(random_unimodular(&mut rng), random_unimodular(&mut rng));
            let w = match assemble_window(&s, 0, size - 1, bc) {
                Ok(w) => w,
                Err(e) => return error_row(i, e.to_string()),
            };
            let z = C64::from_polar(
                rng.random_range(1.0..1.5),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            match davis_simon_gap(&w, z) {
                Ok(d) => BatteryRow {
                    instance: i,
                    size: size as usize,
                    a: 0,
                    b: size - 1,
                    z,
                    value: d.product,
                    reference: d.bound,
                    error: (d.product / d.bound - 1.0).max(0.0),
                    ok: d.holds,
                    note: None,
                },
                Err(e) => error_row(i, e.to_string()),
            }
        })
        .collect();
    Ok(finish_battery(rows))
}

fn restriction_check(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let instances = cfg.params.instances.unwrap_or(40);
    let form = cfg.params.boundary_terms.unwrap_or_default();
    let rows = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            let s = random_scheme(&mut rng, 0.3..0.95);
            // cycle through the four endpoint parities
            let a = 8 + (i % 2) as i64;
            let b = 23 + ((i / 2) % 2) as i64;
            let bc = BoundaryPair::new(random_unimodular(&mut rng), random_unimodular(&mut rng));
            let w = match assemble_window(&s, a, b, bc) {
                Ok(w) => w,
                Err(e) => return error_row(i, e.to_string()),
            };
            let Some(z) = circle_point_off_spectrum(&mut rng, &w, 1e-3) else {
                return error_row(i, "no admissible z".into());
            };
            let alphas = s.coefficients(0, 33);
            let p0 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let p1 = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let mut psi = solve_extended(&alphas, 0, z, p0, p1);
            let scale = psi.iter().map(|v| v.norm()).fold(0.0, f64::max);
            psi.iter_mut().for_each(|v| *v /= scale);
            let seg = &psi[(a - 1) as usize..=(b + 1) as usize];
            match restriction_residual(&w, z, seg, form) {
                Ok(r) => BatteryRow {
                    instance: i,
                    size: w.size(),
                    a,
                    b,
                    z,
                    value: r,
                    reference: 0.0,
                    error: r,
                    ok: r < ORACLE_TOL,
                    note: None,
                },
                Err(e) => error_row(i, e.to_string()),
            }
        })
        .collect();
    Ok(finish_battery(rows))
}

fn detform_check(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let instances = cfg.params.instances.unwrap_or(100);
    let rows = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            let s = random_scheme(&mut rng, 0.0..0.95);
            let n = rng.random_range(2..=12usize);
            let z = random_unimodular(&mut rng);
            let direct = transfer_product(&s, n, z).matrix();
            match transfer_via_determinants(&s, n, z) {
                Ok(m) => {
                    let err = m
                        .max_abs_diff(&direct)
                        .min(m.max_abs_diff(&direct.scale_real(-1.0)))
                        / direct.max_abs();
                    BatteryRow {
                        instance: i,
                        size: n,
                        a: 0,
                        b: n as i64 - 1,
                        z,
                        value: m.max_abs(),
                        reference: direct.max_abs(),
                        error: err,
                        ok: err < ORACLE_TOL,
                        note: None,
                    }
                }
                Err(e) => error_row(i, e.to_string()),
            }
        })
        .collect();
    let mut out = finish_battery(rows);
    out.table.columns[1] = "n".into();
    Ok(out)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let a = cfg.params.a.unwrap_or(0);
    let b = match (cfg.params.b, cfg.params.size) {
        (Some(b), _) => b,
        (None, size) => a + positive("params.size", size.unwrap_or(64))? as i64 - 1,
    };
    if b < a {
        return Err(ConfigError::at("params.b", "must be >= params.a"));
    }
    let bc = boundary(cfg);
    let w = assemble_window(&s, a, b, bc).map_err(numeric)?;
    let mut failures = Vec::new();
    let unitary = w.is_unimodular();
    if unitary && w.unitarity_defect() >= 1e-12 {
        failures.push(format!("unitarity defect {:e}", w.unitarity_defect()));
    }
    let pairs = match window_spectrum(&w) {
        Ok(p) => p,
        Err(e) => {
            failures.push(e.to_string());
            Vec::new()
        }
    };
    let mut table = Table::new(&["index", "eig_re", "eig_im", "modulus", "residual"]);
    for (i, p) in pairs.iter().enumerate() {
        if unitary && (p.eigenvalue.norm() - 1.0).abs() > 1e-8 {
            failures.push(format!(
                "eigenvalue {i} off the circle: |z| = {}",
                p.eigenvalue.norm()
            ));
        }
        if p.residual >= 1e-8 {
            failures.push(format!("eigenpair {i} residual {:e}", p.residual));
        }
        table.push(vec![
            json!(i),
            json!(p.eigenvalue.re),
            json!(p.eigenvalue.im),
            json!(p.eigenvalue.norm()),
            json!(p.residual),
        ]);
    }
    let summary = format!(
        "window [{a}, {b}]: {} eigenpairs, unitarity defect {:.2e}",
        pairs.len(),
        w.unitarity_defect()
    );
    Ok(TaskOutput {
        table,
        summary,
        failures,
    })
}

fn scan_config(cfg: &ExperimentConfig) -> ScanConfig {
    let d = ScanConfig::default();
    ScanConfig {
        rate_factor: cfg.params.rate_factor.unwrap_or(d.rate_factor),
        r2_min: cfg.params.r2_min.unwrap_or(d.r2_min),
        noise_floor: cfg.params.noise_floor.unwrap_or(d.noise_floor),
        lyapunov_n: cfg.params.lyapunov_n,
        sampling: cfg.sampling,
        bulk_margin: d.bulk_margin,
    }
}

fn localize(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let s = scheme(cfg)?;
    let sizes = cfg
        .params
        .sizes
        .clone()
        .unwrap_or_else(|| vec![cfg.params.size.unwrap_or(512)]);
    for &size in &sizes {
        if size < 64 {
            return Err(ConfigError::at(
                "params.size",
                "localization scan needs size >= 64",
            ));
        }
    }
    let bc = boundary(cfg);
    let sc = scan_config(cfg);
    let mut table = Table::new(&[
        "size",
        "lambda",
        "omega",
        "eig_re",
        "eig_im",
        "center",
        "rate",
        "r2",
        "ipr",
        "L_ref",
        "localized_flag",
        "bulk",
    ]);
    let mut summaries = Vec::new();
    let mut failures = Vec::new();
    for &size in &sizes {
        let reports = match localization_scan(&s, size, bc, &sc) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("size {size}: {e}"));
                continue;
            }
        };
        for r in &reports {
            table.push(vec![
                json!(size),
                json!(s.lambda()),
                json!(s.frequency().omega),
                json!(r.eigenvalue.re),
                json!(r.eigenvalue.im),
                json!(r.center),
                json!(r.rate),
                json!(r.r2),
                json!(r.ipr),
                json!(r.lyapunov_ref),
                json!(r.localized),
                json!(r.bulk),
            ]);
        }
        let sum = ScanSummary::of(&reports);
        summaries.push(format!(
            "size {size}: {}/{} bulk localized ({:.1}%)",
            sum.bulk_localized,
            sum.bulk,
            100.0 * sum.bulk_fraction()
        ));
    }
    Ok(TaskOutput {
        table,
        summary: summaries.join("; "),
        failures,
    })
}

fn dio_check(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let omega = Frequency::new(cfg.scheme.omega);
    let eps = cfg.params.epsilon.unwrap_or(1e-3);
    if !(eps > 0.0) {
        return Err(ConfigError::at("params.epsilon", "must be > 0"));
    }
    let horizon = cfg.params.horizon.unwrap_or(10_000);
    if horizon == 0 || horizon > 1_000_000 {
        return Err(ConfigError::at("params.horizon", "must lie in [1, 1e6]"));
    }
    let c = diophantine_margin(omega, eps, horizon);
    let mut table = Table::new(&["omega", "epsilon", "horizon", "margin", "worst_n", "passes"]);
    table.push(vec![
        json!(c.omega),
        json!(c.epsilon),
        json!(c.horizon),
        json!(c.margin),
        json!(c.worst_n),
        json!(c.passes),
    ]);
    let summary = format!(
        "omega = {}: margin {} at n = {} ({})",
        c.omega,
        c.margin,
        c.worst_n,
        if c.passes { "passes" } else { "fails" }
    );
    Ok(TaskOutput {
        table,
        summary,
        failures: Vec::new(),
    })
}
