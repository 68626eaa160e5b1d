use cmv_core::cmv::{assemble_window, char_poly, BoundaryPair};
use cmv_core::cocycle::{
    szego_matrix, transfer_product_at, transfer_product_with_root, FactoredProduct,
};
use cmv_core::linalg::{principal_sqrt, C64};
use cmv_core::lyapunov::{deviation_profile, estimate_ln, SamplingConfig};
use cmv_core::model::random::random_scheme;
use cmv_core::model::torus::mod1;
use cmv_core::model::{
    diophantine_margin, orbit_point, skew_shift_step, Frequency, Phase, TrigPolynomial,
    VerblunskyScheme,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded_scheme(seed: u64, lo: f64, hi: f64) -> VerblunskyScheme {
    random_scheme(&mut ChaCha8Rng::seed_from_u64(seed), lo..hi)
}

fn torus_dist(a: f64, b: f64) -> f64 {
    let d = mod1(a - b);
    d.min(1.0 - d)
}

fn unimodular() -> impl Strategy<Value = C64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_closed_form_matches_iteration(x in 0.0..1.0f64, y in 0.0..1.0f64, w in 0.0..1.0f64, n in 0usize..400) {
        let (p, f) = (Phase::new(x, y), Frequency::new(w));
        let mut q = p;
        for _ in 0..n {
            q = skew_shift_step(q, f);
        }
        let c = orbit_point(p, f, n as i64);
        // iteration accumulates one rounding per step
        let tol = 1e-13 * (n as f64 + 1.0) * (n as f64 + 1.0);
        prop_assert!(torus_dist(c.x, q.x) < tol, "{} vs {}", c.x, q.x);
        prop_assert!(torus_dist(c.y, q.y) < tol);
        prop_assert!((0.0..1.0).contains(&c.x) && (0.0..1.0).contains(&c.y));
    }

    #[test]
    fn orbit_is_a_group_action(x in 0.0..1.0f64, y in 0.0..1.0f64, w in 0.0..1.0f64, j in -500i64..500, k in 0i64..500) {
        let f = Frequency::new(w);
        let p = Phase::new(x, y);
        let direct = orbit_point(p, f, j + k);
        let stepped = orbit_point(orbit_point(p, f, j), f, k);
        prop_assert!(torus_dist(direct.x, stepped.x) < 1e-9);
        prop_assert!(torus_dist(direct.y, stepped.y) < 1e-9);
    }

    #[test]
    fn coefficients_respect_coupling_bound(seed in any::<u64>(), n in -1000i64..1000) {
        let s = seeded_scheme(seed, 0.0, 0.99);
        prop_assert!(s.alpha(n).norm() <= s.coupling_bound() + 1e-15);
        prop_assert!(s.coupling_bound() < 1.0);
    }

    #[test]
    fn sup_certificate_dominates_samples(seed in any::<u64>(), x in 0.0..1.0f64, y in 0.0..1.0f64) {
        let s = seeded_scheme(seed, 0.5, 0.9);
        let cert = s.sampler().sup_certificate(64);
        prop_assert!(s.sampler().eval(x, y).norm() <= cert.bound + 1e-12);
        prop_assert!(cert.bound <= cert.l1 + 1e-15);
    }

    #[test]
    fn json_round_trip_preserves_hash(seed in any::<u64>()) {
        let s = seeded_scheme(seed, 0.0, 0.99);
        let t = VerblunskyScheme::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(s.hash(), t.hash());
        prop_assert_eq!(s.alpha(37), t.alpha(37));
    }

    #[test]
    fn diophantine_margin_is_monotone_in_horizon(w in 0.0..1.0f64, h in 1u64..2000, extra in 0u64..2000) {
        let f = Frequency::new(w);
        let short = diophantine_margin(f, 0.1, h);
        let long = diophantine_margin(f, 0.1, h + extra);
        prop_assert!(long.margin <= short.margin);
        prop_assert!(!long.passes || short.passes);
    }

    #[test]
    fn windows_are_unitary_and_factor(seed in any::<u64>(), a in -30i64..30, len in 1i64..40, beta in unimodular(), gamma in unimodular()) {
        let s = seeded_scheme(seed, 0.0, 0.99);
        let w = assemble_window(&s, a, a + len - 1, BoundaryPair::new(beta, gamma)).unwrap();
        prop_assert!(w.unitarity_defect() < 1e-12);
        prop_assert!(w.factorization_defect() < 1e-13);
        prop_assert!(w.off_band_max() == 0.0);
    }

    #[test]
    fn char_poly_has_unit_modulus_determinant(seed in any::<u64>(), len in 1i64..24) {
        let s = seeded_scheme(seed, 0.0, 0.95);
        let w = assemble_window(&s, 0, len - 1, BoundaryPair::default()).unwrap();
        // Φ(0) = det(−E)
        let phi0 = char_poly(&w, C64::new(0.0, 0.0));
        prop_assert!((phi0.phi_cap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn szego_matrices_have_unit_determinant(r in 0.0..0.999f64, t in 0.0..std::f64::consts::TAU, z in unimodular()) {
        let m = szego_matrix(C64::from_polar(r, t), z).unwrap();
        prop_assert!((m.0.det() - 1.0).norm() < 1e-12 / (1.0 - r * r));
    }

    #[test]
    fn cocycle_law(seed in any::<u64>(), n1 in 1usize..150, n2 in 1usize..150, z in unimodular()) {
        let s = seeded_scheme(seed, 0.0, 0.95);
        let p = s.base();
        let whole = transfer_product_at(&s, p, n1 + n2, z);
        let first = transfer_product_at(&s, p, n1, z);
        let shifted = orbit_point(p, s.frequency(), n1 as i64);
        let second = transfer_product_at(&s, shifted, n2, z);
        let comp = FactoredProduct::compose(&second, &first);
        prop_assert!(whole.rel_diff_up_to_sign(&comp) < 1e-9);
        prop_assert!((whole.log_norm() - comp.log_norm()).abs() < 1e-9);
    }

    #[test]
    fn branch_of_root_only_flips_sign(seed in any::<u64>(), n in 1usize..60, z in unimodular()) {
        let s = seeded_scheme(seed, 0.0, 0.95);
        let r = principal_sqrt(z);
        let plus = transfer_product_with_root(&s, s.base(), 0, n, r);
        let minus = transfer_product_with_root(&s, s.base(), 0, n, -r);
        prop_assert_eq!(plus.log_scale, minus.log_scale);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(plus.b.max_abs_diff(&minus.b.scale_real(sign)) < 1e-12);
        prop_assert!((plus.det - minus.det).norm() < 1e-12);
    }

    #[test]
    fn subadditivity_of_log_norms(seed in any::<u64>(), n1 in 1usize..100, n2 in 1usize..100, z in unimodular()) {
        let s = seeded_scheme(seed, 0.0, 0.95);
        let p = s.base();
        let whole = transfer_product_at(&s, p, n1 + n2, z).log_norm();
        let a = transfer_product_at(&s, p, n1, z).log_norm();
        let b = transfer_product_at(&s, orbit_point(p, s.frequency(), n1 as i64), n2, z).log_norm();
        prop_assert!(whole <= a + b + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn deviation_measure_is_nonincreasing_in_threshold(seed in any::<u64>(), n in 5usize..40) {
        let s = seeded_scheme(seed, 0.3, 0.95);
        let t = [0.0, 0.01, 0.05, 0.1, 0.5, 1.0];
        let d = deviation_profile(&s, C64::new(1.0, 0.0), n, &t, &SamplingConfig::grid(8)).unwrap();
        prop_assert!(d.empirical_measure.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(d.empirical_measure.iter().all(|&m| (0.0..=1.0).contains(&m)));
    }

    #[test]
    fn lyapunov_estimates_are_reproducible_and_nonnegative(seed in any::<u64>(), n in 1usize..60, z in unimodular()) {
        let s = seeded_scheme(seed, 0.0, 0.95);
        let cfg = SamplingConfig::monte_carlo(64, seed);
        let a = estimate_ln(&s, z, n, &cfg).unwrap();
        let b = estimate_ln(&s, z, n, &cfg).unwrap();
        prop_assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        // det = 1 forces ‖M‖ ≥ 1
        prop_assert!(a.mean >= -1e-12);
    }
}

#[test]
fn constant_sampler_scheme_is_phase_independent() {
    let s = VerblunskyScheme::new(
        TrigPolynomial::constant(C64::new(0.3, 0.4)),
        0.5,
        Frequency::golden(),
        Phase::new(0.25, 0.75),
    )
    .unwrap();
    for n in -5..5 {
        assert_eq!(s.alpha(n), C64::new(0.15, 0.2));
    }
}
