use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CmvError, Result};
use crate::linalg::C64;

use super::sampler::{SupCertificate, TrigPolynomial, SUP_GRID_SIDE};
use super::torus::{orbit_point, Frequency, Phase};

/// `ρ = √(1 − |α|²)`, computed as `√((1 − |α|)(1 + |α|))` to keep relative
/// accuracy near the unit circle. Clamped at zero for `|α| ≥ 1`.
#[inline]
pub fn rho(alpha: C64) -> f64 {
    let r = alpha.norm();
    ((1.0 - r) * (1.0 + r)).max(0.0).sqrt()
}

/// Coefficients `α_n = λ·α(T_ω^n(x, y))` generated by a trigonometric
/// sampler along the skew-shift orbit of a base phase.
#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskyScheme {
    sampler: TrigPolynomial,
    lambda: f64,
    frequency: Frequency,
    base: Phase,
    sup: SupCertificate,
}

impl VerblunskyScheme {
    /// Validates `0 ≤ λ < 1` and the coupling bound `λ·sup|α| < 1`, where the
    /// sup is certified by [`TrigPolynomial::sup_certificate`].
    pub fn new(
        sampler: TrigPolynomial,
        lambda: f64,
        frequency: Frequency,
        base: Phase,
    ) -> Result<Self> {
        if !lambda.is_finite() || !(0.0..1.0).contains(&lambda) {
            return Err(CmvError::InvalidScheme(format!(
                "lambda = {lambda} must lie in [0, 1)"
            )));
        }
        if sampler
            .terms()
            .any(|(_, _, c)| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(CmvError::InvalidScheme(
                "non-finite sampler coefficient".into(),
            ));
        }
        if !frequency.omega.is_finite() || !base.x.is_finite() || !base.y.is_finite() {
            return Err(CmvError::InvalidScheme(
                "non-finite frequency or phase".into(),
            ));
        }
        let sup = sampler.sup_certificate(SUP_GRID_SIDE);
        if lambda * sup.bound >= 1.0 {
            return Err(CmvError::InvalidScheme(format!(
                "coupling bound violated: lambda * sup|alpha| <= {} is not < 1",
                lambda * sup.bound
            )));
        }
        Ok(VerblunskyScheme {
            sampler,
            lambda,
            frequency,
            base,
            sup,
        })
    }

    pub fn sampler(&self) -> &TrigPolynomial {
        &self.sampler
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn base(&self) -> Phase {
        self.base
    }

    pub fn sup_certificate(&self) -> SupCertificate {
        self.sup
    }

    /// `λ·sup|α|` upper bound; every generated coefficient has modulus at
    /// most this.
    pub fn coupling_bound(&self) -> f64 {
        self.lambda * self.sup.bound
    }

    /// Same sampler and frequency, different base phase.
    pub fn with_base(&self, base: Phase) -> Self {
        VerblunskyScheme {
            base,
            ..self.clone()
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.sampler.clone(), lambda, self.frequency, self.base)
    }

    pub fn with_frequency(&self, frequency: Frequency) -> Self {
        VerblunskyScheme {
            frequency,
            ..self.clone()
        }
    }

    /// `α_n` starting from an arbitrary phase.
    #[inline]
    pub fn coefficient_at(&self, phase: Phase, n: i64) -> C64 {
        if self.lambda == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let p = orbit_point(phase, self.frequency, n);
        self.sampler.eval(p.x, p.y) * self.lambda
    }

    /// `α_n` from the scheme's own base phase.
    #[inline]
    pub fn alpha(&self, n: i64) -> C64 {
        self.coefficient_at(self.base, n)
    }

    /// `α_n` with validation of `|α_n| < 1`.
    pub fn verblunsky_at(&self, n: i64) -> Result<C64> {
        let a = self.alpha(n);
        let m = a.norm();
        if !(m < 1.0) {
            return Err(CmvError::InvalidCoefficient {
                modulus: m,
                requirement: "< 1",
            });
        }
        Ok(a)
    }

    /// `α_a, …, α_b` (inclusive; empty when `b < a`).
    pub fn coefficients(&self, a: i64, b: i64) -> Vec<C64> {
        (a..=b).map(|n| self.alpha(n)).collect()
    }

    pub fn to_spec(&self) -> SchemeSpec {
        SchemeSpec {
            coefficients: self
                .sampler
                .terms()
                .map(|(k, l, c)| (k, l, c.re, c.im))
                .collect(),
            lambda: self.lambda,
            omega: self.frequency.omega,
            base_x: self.base.x,
            base_y: self.base.y,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("scheme spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: SchemeSpec =
            serde_json::from_str(s).map_err(|e| CmvError::InvalidScheme(e.to_string()))?;
        spec.build()
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

/// Serialized form of a scheme:
/// `{coefficients: [[k, l, re, im], ...], lambda, omega, base_x, base_y}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub coefficients: Vec<(i32, i32, f64, f64)>,
    pub lambda: f64,
    pub omega: f64,
    #[serde(default)]
    pub base_x: f64,
    #[serde(default)]
    pub base_y: f64,
}

impl SchemeSpec {
    pub fn build(&self) -> Result<VerblunskyScheme> {
        let sampler = TrigPolynomial::from_terms(
            self.coefficients
                .iter()
                .map(|&(k, l, re, im)| (k, l, C64::new(re, im))),
        );
        VerblunskyScheme::new(
            sampler,
            self.lambda,
            Frequency::new(self.omega),
            Phase::new(self.base_x, self.base_y),
        )
    }
}
