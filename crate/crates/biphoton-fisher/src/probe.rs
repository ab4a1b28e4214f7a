//! The two-photon polarization probe state and its exact parameter
//! derivatives.
//!
//! A dispersive sample imprints the phase difference `Delta(w) = phi0 +
//! phi1 (w - w0)` on each photon; tracing out frequency leaves a 4x4
//! polarization density matrix in the basis HH, HV, VH, VV whose
//! coherences are damped by spectral moments:
//!
//! * diagonal entries are all 1/4,
//! * single-photon coherences carry `e^{-i phi0} V` with `V = moment(phi1, 0)`,
//! * the sum coherence (HH <-> VV) carries `e^{-2 i phi0} moment(phi1, phi1)`,
//! * the difference coherence (HV <-> VH) carries `moment(phi1, -phi1)`
//!   and no phase.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::spectral::{moment, moment_dphi1, SpectralParams};

/// Estimation target: mean phase `phi0` (radians) and dispersion slope
/// `phi1` (radians per frequency unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub phi0: f64,
    pub phi1: f64,
}

impl PhaseParams {
    pub fn new(phi0: f64, phi1: f64) -> Self {
        Self { phi0, phi1 }
    }
}

/// Probe state bundle: the density matrix and both parameter derivatives
/// at a fixed parameter point.
#[derive(Debug, Clone)]
pub struct ProbeState {
    pub rho: ComplexMatrix,
    pub d_rho: [ComplexMatrix; 2],
    pub phase: PhaseParams,
    pub spectral: SpectralParams,
}

impl ProbeState {
    pub fn new(phase: PhaseParams, spectral: SpectralParams) -> Self {
        Self {
            rho: density_matrix(&phase, &spectral),
            d_rho: [
                density_derivative(&phase, &spectral, 0),
                density_derivative(&phase, &spectral, 1),
            ],
            phase,
            spectral,
        }
    }
}

/// Coherence amplitudes shared by the state and its derivatives.
struct Coherences {
    /// e^{-i phi0}
    e1: Complex64,
    /// e^{-2 i phi0}
    e2: Complex64,
    /// single-photon damping V = moment(phi1, 0)
    single: f64,
    /// sum-channel damping moment(phi1, phi1)
    sum: f64,
    /// difference-channel damping moment(phi1, -phi1)
    diff: f64,
}

fn coherences(p: &PhaseParams, s: &SpectralParams) -> Coherences {
    Coherences {
        e1: Complex64::from_polar(1.0, -p.phi0),
        e2: Complex64::from_polar(1.0, -2.0 * p.phi0),
        single: moment(s, p.phi1, 0.0),
        sum: moment(s, p.phi1, p.phi1),
        diff: moment(s, p.phi1, -p.phi1),
    }
}

/// Fill the Hermitian 4x4 pattern from the three coherence channels.
///
/// `diag` sits on the diagonal, `single` on every single-photon coherence
/// (HH<->HV, HH<->VH, HV<->VV, VH<->VV), `sum` on HH<->VV and `diff` on
/// HV<->VH; the lower triangle is the conjugate.
fn assemble(diag: f64, single: Complex64, sum: Complex64, diff: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    for i in 0..4 {
        m[(i, i)] = Complex64::new(diag, 0.0);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        m[(i, j)] = single;
        m[(j, i)] = single.conj();
    }
    m[(0, 3)] = sum;
    m[(3, 0)] = sum.conj();
    m[(1, 2)] = diff;
    m[(2, 1)] = diff.conj();
    m
}

/// The 4x4 polarization density matrix rho(phi0, phi1, epsilon, sigma).
pub fn density_matrix(p: &PhaseParams, s: &SpectralParams) -> ComplexMatrix {
    let c = coherences(p, s);
    assemble(
        0.25,
        c.e1.scale(0.25 * c.single),
        c.e2.scale(0.25 * c.sum),
        Complex64::new(0.25 * c.diff, 0.0),
    )
}

/// Exact derivative of [`density_matrix`] with respect to parameter `j`
/// (0 = phi0, 1 = phi1). Traceless Hermitian.
pub fn density_derivative(p: &PhaseParams, s: &SpectralParams, j: usize) -> ComplexMatrix {
    assert!(j < 2, "parameter index must be 0 or 1");
    let c = coherences(p, s);
    if j == 0 {
        // phi0 enters only through the phases: -i per single photon,
        // -2i on the sum coherence, not at all on the difference.
        let minus_i = Complex64::new(0.0, -1.0);
        assemble(
            0.0,
            minus_i * c.e1.scale(0.25 * c.single),
            minus_i.scale(2.0) * c.e2.scale(0.25 * c.sum),
            Complex64::new(0.0, 0.0),
        )
    } else {
        assemble(
            0.0,
            c.e1.scale(0.25 * moment_dphi1(s, p.phi1, 0.0)),
            c.e2.scale(0.25 * moment_dphi1(s, p.phi1, 1.0)),
            Complex64::new(0.25 * moment_dphi1(s, p.phi1, -1.0), 0.0),
        )
    }
}

/// Stokes correlator `<X1 X2> = E[cos Delta1 cos Delta2]`, closed form
/// `(cos(2 phi0) moment(phi1, phi1) + moment(phi1, -phi1)) / 2`.
pub fn stokes_correlator(p: &PhaseParams, s: &SpectralParams) -> f64 {
    let c = coherences(p, s);
    0.5 * ((2.0 * p.phi0).cos() * c.sum + c.diff)
}
