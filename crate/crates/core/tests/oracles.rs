use cmv_core::cmv::{assemble_window, char_poly, parse_matrix_market, BoundaryPair, CmvWindow};
use cmv_core::green::{green_decay_fit, green_matrix};
use cmv_core::linalg::{Mat2, C64};
use cmv_core::localization::{
    decay_fit, localization_scan, window_spectrum, ScanConfig, ScanSummary,
};
use cmv_core::lyapunov::{estimate_ln, extrapolate, LyapunovEstimate, SamplingConfig};
use cmv_core::model::random::random_scheme;
use cmv_core::model::{Frequency, Phase, TrigPolynomial, VerblunskyScheme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ONE: C64 = C64::new(1.0, 0.0);

fn constant_scheme(c: C64, lambda: f64) -> VerblunskyScheme {
    VerblunskyScheme::new(
        TrigPolynomial::constant(c),
        lambda,
        Frequency::golden(),
        Phase::ORIGIN,
    )
    .unwrap()
}

fn two_mode(lambda: f64) -> VerblunskyScheme {
    VerblunskyScheme::new(
        TrigPolynomial::two_mode_average(),
        lambda,
        Frequency::golden(),
        Phase::new(0.1, 0.2),
    )
    .unwrap()
}

/// `(1/n) log ‖M^n‖` by plain repeated multiplication, fine for short n.
fn constant_cocycle_ln(alpha: C64, z: C64, n: usize) -> f64 {
    let t = z.arg().rem_euclid(std::f64::consts::TAU);
    let r = C64::from_polar(1.0, t / 2.0);
    let k = 1.0 / (1.0 - alpha.norm_sqr()).sqrt();
    let m = Mat2::new(r * k, -alpha.conj() / r * k, -alpha * r * k, k / r);
    let mut p = Mat2::IDENTITY;
    for _ in 0..n {
        p = m * p;
    }
    let dense = faer::Mat::from_fn(2, 2, |i, j| p.0[i][j]);
    let s = dense.singular_values().unwrap();
    s.into_iter().fold(0.0, f64::max).ln() / n as f64
}

#[test]
fn constant_cocycle_matches_direct_powers() {
    for (alpha, theta) in [(0.3, 0.0), (0.6, 1.0), (0.2, 2.5), (0.9, 3.1)] {
        let c = C64::new(alpha, 0.0);
        let s = constant_scheme(c, 1.0 - 1e-9);
        let z = C64::from_polar(1.0, theta);
        let est = estimate_ln(&s, z, 30, &SamplingConfig::grid(4)).unwrap();
        let direct = constant_cocycle_ln(s.alpha(0), z, 30);
        assert!(
            (est.mean - direct).abs() < 1e-12,
            "alpha {alpha} theta {theta}: {} vs {direct}",
            est.mean
        );
        assert!(est.sample_std < 1e-12);
    }
}

#[test]
fn extrapolation_recovers_synthetic_limit() {
    let e = |n: usize| LyapunovEstimate {
        n,
        z: ONE,
        mean: 0.7 + 2.5 / n as f64,
        std_error: 0.0,
        sample_std: 0.0,
        samples: 1,
        grid: true,
    };
    let x = extrapolate(&[e(50), e(100), e(200), e(400)]).unwrap();
    assert!((x.limit - 0.7).abs() < 1e-12);
    assert!((x.c - 2.5).abs() < 1e-10);
    assert!(extrapolate(&[e(50)]).is_err());
}

#[test]
fn eigenvalues_are_roots_of_char_poly() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let s = random_scheme(&mut rng, 0.2..0.95);
        let w = assemble_window(
            &s,
            -4,
            20,
            BoundaryPair::new(C64::from_polar(1.0, 0.4), -ONE),
        )
        .unwrap();
        for p in window_spectrum(&w).unwrap() {
            assert!((p.eigenvalue.norm() - 1.0).abs() < 1e-10);
            assert!(p.residual < 1e-10);
            // |Φ(λ)| relative to a point at the same scale off the spectrum
            let at = char_poly(&w, p.eigenvalue).phi_cap.norm();
            let off = char_poly(&w, p.eigenvalue * 1.1).phi_cap.norm();
            assert!(at < 1e-9 * off.max(1.0), "{at} vs {off}");
        }
    }
}

#[test]
fn green_matrix_inverts_the_operator() {
    let s = two_mode(0.8);
    let w = assemble_window(&s, 3, 30, BoundaryPair::default()).unwrap();
    let z = C64::new(0.0, 1.3);
    let g = green_matrix(&w, z).unwrap();
    // rebuild zL* − M from the factors and multiply back
    let n = w.size();
    let t = faer::Mat::from_fn(n, n, |i, j| z * w.l()[(j, i)].conj() - w.m()[(i, j)]);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v: C64 = (0..n).map(|k| t[(i, k)] * g.entries[(k, j)]).sum();
            let target = if i == j { ONE } else { C64::new(0.0, 0.0) };
            worst = worst.max((v - target).norm());
        }
    }
    assert!(worst < 1e-12, "{worst}");
    assert!(g.residual < 1e-12);
}

#[test]
fn constant_window_green_decays_at_lyapunov_rate() {
    // constant real α: z = 1 lies in the gap and L(1) = log((1+α)/ρ)
    let alpha = 0.5;
    let s = constant_scheme(C64::new(alpha, 0.0), 1.0 - 1e-12);
    let w = assemble_window(&s, 0, 63, BoundaryPair::default()).unwrap();
    let g = green_matrix(&w, ONE).unwrap();
    let fit = green_decay_fit(&g).unwrap();
    let a = s.alpha(0).re;
    let l = ((1.0 + a) / (1.0 - a * a).sqrt()).ln();
    assert!((l - 0.5 * 3f64.ln()).abs() < 1e-9);
    assert!((fit.rate - l).abs() < 0.05 * l, "rate {} vs {l}", fit.rate);
    assert!(fit.r2 > 0.95);
}

#[test]
fn eigenvector_fit_on_synthetic_profile() {
    let n = 128;
    let v: Vec<C64> = (0..n)
        .map(|i| {
            let d = (i as f64 - 40.0).abs();
            C64::from_polar((-0.3 * d).exp(), 0.7 * i as f64)
        })
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = v.into_iter().map(|x| x / norm).collect();
    let fit = decay_fit(&v, 1e-12).unwrap();
    assert_eq!(fit.center, 40);
    assert!((fit.rate - 0.3).abs() < 1e-6, "{}", fit.rate);
    assert!(fit.r2 > 0.999);
    assert!(!fit.flat);
}

#[test]
fn free_scheme_has_no_localized_states() {
    let s = two_mode(0.0);
    let reports = localization_scan(
        &s,
        128,
        BoundaryPair::new(C64::from_polar(1.0, 0.3), ONE),
        &ScanConfig::default(),
    )
    .unwrap();
    assert_eq!(reports.len(), 128);
    let sum = ScanSummary::of(&reports);
    assert_eq!(sum.localized, 0);
    assert!(sum.bulk > 0);
}

#[test]
fn matrix_market_round_trip() {
    let s = two_mode(0.7);
    let w = assemble_window(
        &s,
        -2,
        9,
        BoundaryPair::new(C64::from_polar(1.0, 1.0), C64::from_polar(1.0, -2.0)),
    )
    .unwrap();
    let text = w.to_matrix_market();
    let back = parse_matrix_market(&text).unwrap();
    let e = w.matrix();
    for i in 0..w.size() {
        for j in 0..w.size() {
            assert_eq!(back[(i, j)], e[(i, j)]);
        }
    }
}

#[test]
fn window_from_explicit_coefficients_matches_scheme_window() {
    let s = two_mode(0.9);
    let bc = BoundaryPair::new(C64::from_polar(1.0, 0.2), C64::from_polar(1.0, 2.2));
    let w = assemble_window(&s, 5, 20, bc).unwrap();
    let v = CmvWindow::from_coefficients(5, s.coefficients(4, 20), Some(bc.beta), Some(bc.gamma))
        .unwrap();
    assert_eq!(w.matrix(), v.matrix());
}
