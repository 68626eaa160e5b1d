//! Quasi-periodic CMV matrices with skew-shift Verblunsky coefficients.
//!
//! The crate builds finite boundary-modified CMV windows, the Szegő transfer
//! cocycle over the skew-shift, finite-volume Green's functions, and the
//! Lyapunov and localization diagnostics computed from them.

// `!(x < y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cmv;
pub mod cocycle;
pub mod error;
pub mod green;
pub mod linalg;
pub mod localization;
pub mod lyapunov;
pub mod model;

pub use error::{CmvError, Result};
pub use linalg::C64;
