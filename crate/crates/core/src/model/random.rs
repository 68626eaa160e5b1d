//! Random instance generation shared by the batch runner and the tests.

use rand::Rng;

use crate::linalg::C64;

use super::sampler::TrigPolynomial;
use super::scheme::VerblunskyScheme;
use super::torus::{Frequency, Phase};

/// A random nonconstant sampler with up to `max_terms` modes of degree at
/// most `max_degree`, scaled so that `Σ|c| = 1`.
pub fn random_sampler<R: Rng + ?Sized>(
    rng: &mut R,
    max_terms: usize,
    max_degree: i32,
) -> TrigPolynomial {
    let terms = rng.random_range(1..=max_terms.max(1));
    let mut raw = Vec::with_capacity(terms + 1);
    for _ in 0..terms {
        let mut k = rng.random_range(-max_degree..=max_degree);
        let l = rng.random_range(-max_degree..=max_degree);
        if k == 0 && l == 0 {
            k = 1;
        }
        let c = C64::from_polar(
            rng.random_range(0.1..1.0),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        raw.push((k, l, c));
    }
    let p = TrigPolynomial::from_terms(raw);
    let l1 = p.l1_norm();
    TrigPolynomial::from_terms(p.terms().map(|(k, l, c)| (k, l, c / l1)))
}

/// A random valid scheme with `λ` drawn from `lambda_range`.
pub fn random_scheme<R: Rng + ?Sized>(
    rng: &mut R,
    lambda_range: std::ops::Range<f64>,
) -> VerblunskyScheme {
    let sampler = random_sampler(rng, 3, 2);
    let lambda = if lambda_range.is_empty() {
        lambda_range.start
    } else {
        rng.random_range(lambda_range)
    };
    let omega = Frequency::new(rng.random::<f64>());
    let base = Phase::new(rng.random::<f64>(), rng.random::<f64>());
    VerblunskyScheme::new(sampler, lambda, omega, base)
        .expect("l1-normalized sampler with lambda < 1 is valid")
}

/// A random point strictly inside the unit disk with modulus at most `r`.
pub fn random_disk_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> C64 {
    C64::from_polar(
        r * rng.random::<f64>().sqrt(),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

/// A uniformly random point on the unit circle.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}
