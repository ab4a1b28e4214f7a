//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the estimation toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Input matrix fails the Hermiticity check.
    #[error("matrix is not Hermitian: max asymmetry |A - A^dag| = {max_asymmetry:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    /// 2x2 Fisher-type matrix cannot be inverted.
    #[error("singular Fisher matrix: det = {det:.3e} <= 1e-14")]
    SingularMatrix { det: f64 },

    /// Joint-estimation quantities are undefined at the pure-state boundary phi1 = 0.
    #[error("singular point: {quantity} is undefined at phi1 = 0 (pure-state boundary)")]
    SingularPoint { quantity: &'static str },

    /// The state derivative has weight connecting kernel to kernel of rho.
    #[error("derivative leaves support: kernel-to-kernel weight {weight:.3e} exceeds 1e-10")]
    DerivativeLeavesSupport { weight: f64 },

    /// An outcome has vanishing probability but non-vanishing derivative.
    #[error("FI divergence at boundary: outcome {outcome} has p = {prob:.3e} but |dp| = {dprob:.3e}")]
    FiDivergence {
        outcome: usize,
        prob: f64,
        dprob: f64,
    },

    /// Spectral parameters violate sigma > 0 or |epsilon| <= 1.
    #[error("invalid spectral parameters: sigma = {sigma}, epsilon = {epsilon}")]
    InvalidSpectralParams { sigma: f64, epsilon: f64 },

    /// Maximum-likelihood search terminated on the boundary of the identifiable region.
    #[error("boundary fit: estimate (phi0 = {phi0:.6}, phi1 = {phi1:.6}) lies on the edge of the identifiable region")]
    BoundaryFit { phi0: f64, phi1: f64 },

    /// Sample covariance needs at least two estimates.
    #[error("fewer than 2 estimates: got {count}")]
    TooFewEstimates { count: usize },

    /// Invalid sweep or Monte-Carlo configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Output file could not be written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
