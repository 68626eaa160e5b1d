use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cmv::BoundaryPair;
use crate::green::{BoundaryTermForm, PrefactorForm};
use crate::linalg::C64;
use crate::lyapunov::SamplingConfig;
use crate::model::{Frequency, SchemeSpec, TrigPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Lyapunov,
    Ldt,
    Avalanche,
    Multiscale,
    Positivity,
    UniformBound,
    GreenCheck,
    DavisSimon,
    RestrictionCheck,
    Spectrum,
    Localize,
    DioCheck,
    DetformCheck,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Lyapunov => "lyapunov",
            Task::Ldt => "ldt",
            Task::Avalanche => "avalanche",
            Task::Multiscale => "multiscale",
            Task::Positivity => "positivity",
            Task::UniformBound => "uniform-bound",
            Task::GreenCheck => "green-check",
            Task::DavisSimon => "davis-simon",
            Task::RestrictionCheck => "restriction-check",
            Task::Spectrum => "spectrum",
            Task::Localize => "localize",
            Task::DioCheck => "dio-check",
            Task::DetformCheck => "detform-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

/// `count` points `radius·e^{2πik/count}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZGrid {
    pub count: usize,
    #[serde(default = "one")]
    pub radius: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
}

impl BoundarySpec {
    pub fn pair(&self) -> BoundaryPair {
        BoundaryPair::new(
            C64::new(self.beta[0], self.beta[1]),
            C64::new(self.gamma[0], self.gamma[1]),
        )
    }
}

/// Task parameters; each task reads the fields it needs and falls back to
/// its own defaults.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Several scales (ldt).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    /// Explicit spectral parameters `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_grid: Option<ZGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    /// Thresholds given as multiples of `P(z)` (ldt), used when
    /// `thresholds` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_p_fractions: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    /// Number of random instances for oracle batteries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<PrefactorForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_terms: Option<BoundaryTermForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lyapunov_n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_scheme")]
    pub scheme: SchemeSpec,
    pub task: Task,
    #[serde(default)]
    pub params: TaskParams,
    #[serde(default)]
    pub sampling: SamplingConfig,
    /// Seed for random instance generation.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

/// `(e^{2πix} + e^{2πiy})/2` at `λ = 0.99`, golden-mean frequency.
pub fn default_scheme() -> SchemeSpec {
    let sampler = TrigPolynomial::two_mode_average();
    SchemeSpec {
        coefficients: sampler
            .terms()
            .map(|(k, l, c)| (k, l, c.re, c.im))
            .collect(),
        lambda: 0.99,
        omega: Frequency::golden().omega,
        base_x: 0.0,
        base_y: 0.0,
    }
}

impl ExperimentConfig {
    pub fn new(task: Task) -> Self {
        ExperimentConfig {
            scheme: default_scheme(),
            task,
            params: TaskParams::default(),
            sampling: SamplingConfig::default(),
            seed: 0,
            output: OutputSpec::default(),
        }
    }

    /// Canonical JSON (field order fixed by the struct definitions).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of the canonical JSON with the output block removed, so
    /// the hash identifies the computation rather than where it was written.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputSpec::default();
        hex::encode(Sha256::digest(c.canonical_json().as_bytes()))
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn z_values(&self) -> Vec<C64> {
        if let Some(zs) = &self.params.z {
            return zs.iter().map(|z| C64::new(z[0], z[1])).collect();
        }
        if let Some(g) = self.params.z_grid {
            return (0..g.count)
                .map(|k| {
                    C64::from_polar(g.radius, std::f64::consts::TAU * k as f64 / g.count as f64)
                })
                .collect();
        }
        vec![C64::new(1.0, 0.0)]
    }
}

/// A configuration problem, with the JSON path of the offending field.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn at(path: &str, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.to_string(),
            message: message.into(),
        }
    }
}
