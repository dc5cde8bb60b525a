use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate ansatz: |p - q| = {gap:e} is below the degeneracy tolerance")]
    DegenerateAnsatz { gap: f64 },

    #[error("ansatz pole encountered at eta = {eta}")]
    PoleEncountered { eta: Complex64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by a vanishing quantity: {0}")]
    Division(String),

    #[error("quadrature on [{a}, {b}] did not converge: estimate {estimate:e}, tolerance {tolerance:e}, {intervals} intervals")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("dimension error: series uses {needed} variables but z has {got}")]
    Dimension { needed: usize, got: usize },

    #[error("no polynomial balance: {order}/({degree} - 1) is not a positive integer")]
    NoPolynomialBalance { order: u32, degree: u32 },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
