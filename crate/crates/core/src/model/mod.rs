//! Torus dynamics, samplers and coefficient generation.

pub mod diophantine;
pub mod random;
pub mod sampler;
pub mod scheme;
pub mod torus;

pub use diophantine::{diophantine_margin, DiophantineCertificate};
pub use sampler::{SupCertificate, TrigPolynomial};
pub use scheme::{rho, SchemeSpec, VerblunskyScheme};
pub use torus::{orbit_point, skew_shift_orbit, skew_shift_step, Frequency, Phase};
