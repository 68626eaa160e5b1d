use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CmvError {
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid Verblunsky coefficient: |alpha| = {modulus} (must be {requirement})")]
    InvalidCoefficient {
        modulus: f64,
        requirement: &'static str,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("spectral parameter is (numerically) in the spectrum: {0}")]
    ZInSpectrum(String),

    #[error("SL(2,R) conjugation left imaginary residual {0:e}")]
    ConjugationFailure(f64),

    #[error("sequence does not solve the eigen-equation: residual {0:e}")]
    InvalidSolution(f64),

    #[error("eigensolver failed on window {0}")]
    Eigensolver(String),
}

pub type Result<T> = std::result::Result<T, CmvError>;
