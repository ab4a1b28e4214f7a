//! Joint estimation of an optical phase and its dispersion-induced
//! dephasing, probed with frequency-correlated photon pairs.
//!
//! A dispersive sample imprints a frequency-dependent phase difference on
//! each photon of a down-conversion pair. Broadband probing turns the
//! first-order dispersion slope into dephasing, so the mean phase and the
//! slope must be estimated together. This crate builds the traced
//! two-qubit polarization state for a Gaussian joint spectrum with
//! tunable frequency correlation, and quantifies what the correlation
//! buys:
//!
//! * [`linalg`] - small dense complex linear algebra (Jacobi
//!   eigendecomposition, tensor products, commutator traces),
//! * [`spectral`] - the Gaussian spectral weight, its exponential moments
//!   and a Gauss-Hermite quadrature oracle,
//! * [`probe`] - the 4x4 polarization state and its exact parameter
//!   derivatives,
//! * [`estimation`] - SLD operators, quantum and classical Fisher
//!   information matrices, the weak-commutativity scalar and the
//!   joint-estimation figure of merit Upsilon,
//! * [`monte_carlo`] - multinomial sampling of the Stokes measurement and
//!   maximum-likelihood fits verifying the Cramér-Rao chain,
//! * [`sweep`] - deterministic CSV sweeps over the correlation grid and
//!   Monte-Carlo campaigns.
//!
//! Every operation is a pure function of its inputs; sweeps and
//! Monte-Carlo repeats parallelize freely and reproduce bit-identical
//! output for identical configuration.
//!
//! The `examples/` directory is the guided tour: one runnable example per
//! capability (`cargo run --release --example <name>`). A thin CLI binary
//! drives the same sweeps from configuration files.

pub mod error;
pub mod estimation;
pub mod linalg;
pub mod monte_carlo;
pub mod probe;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use estimation::{
    fi_matrix, fisher_pair, outcome_probabilities, qfi_matrix, qfi_phase_element, sld_operator,
    stokes_povm, upsilon, weak_commutativity, FisherPair, Povm, StokesOutcome,
};
pub use linalg::{
    commutator_trace, hermitian_eig, sym2_inverse, tensor_product, ComplexMatrix, HermitianEig,
    SymMat2,
};
pub use monte_carlo::{
    empirical_covariance, mle_fit, run_estimation, sample_outcomes, EstimationRun, OutcomeRecord,
};
pub use probe::{density_derivative, density_matrix, stokes_correlator, PhaseParams, ProbeState};
pub use spectral::{gauss_hermite, moment, quadrature_moment, SpectralParams};
pub use sweep::{run_montecarlo, run_sweep, EpsilonGrid, McConfig, Quantity, SweepConfig};
