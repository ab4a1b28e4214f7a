//! Estimation-theory kernels: SLD operators, quantum and classical Fisher
//! information matrices for the Stokes measurement, the weak-commutativity
//! scalar, and the joint-estimation figure of merit Upsilon.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator_trace, hermitian_eig, sym2_inverse, tensor_product, ComplexMatrix, SymMat2,
};
use crate::probe::{density_derivative, density_matrix, PhaseParams};
use crate::spectral::SpectralParams;

/// Eigenvalue-sum cutoff of the SLD support convention: terms with
/// `lambda_s + lambda_t` at or below this are dropped.
pub const SLD_SUPPORT_CUTOFF: f64 = 1e-12;

/// Number of parameters estimated jointly; bounds Upsilon from above.
pub const PARAM_COUNT: f64 = 2.0;

/// Single-photon measurement labels: diagonal, anti-diagonal, right- and
/// left-circular polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StokesOutcome {
    D,
    A,
    R,
    L,
}

impl StokesOutcome {
    pub const ALL: [StokesOutcome; 4] = [
        StokesOutcome::D,
        StokesOutcome::A,
        StokesOutcome::R,
        StokesOutcome::L,
    ];

    fn ket(self) -> [Complex64; 2] {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let r = Complex64::new(inv_sqrt2, 0.0);
        match self {
            StokesOutcome::D => [r, r],
            StokesOutcome::A => [r, -r],
            StokesOutcome::R => [r, Complex64::new(0.0, inv_sqrt2)],
            StokesOutcome::L => [r, Complex64::new(0.0, -inv_sqrt2)],
        }
    }
}

/// The 16-element product POVM of joint Stokes measurements, elements
/// `pi_j (x) pi_k` with `pi_j = |j><j| / 2` over j in {D, A, R, L}.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    labels: Vec<(StokesOutcome, StokesOutcome)>,
}

impl Povm {
    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[(StokesOutcome, StokesOutcome)] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Build the joint Stokes POVM; measuring X half of the time and Y half
/// of the time on each photon.
pub fn stokes_povm() -> Povm {
    let singles: Vec<ComplexMatrix> = StokesOutcome::ALL
        .iter()
        .map(|o| ComplexMatrix::projector(&o.ket()).scaled(Complex64::new(0.5, 0.0)))
        .collect();
    let mut elements = Vec::with_capacity(16);
    let mut labels = Vec::with_capacity(16);
    for (j, pj) in StokesOutcome::ALL.iter().zip(singles.iter()) {
        for (k, pk) in StokesOutcome::ALL.iter().zip(singles.iter()) {
            elements.push(tensor_product(pj, pk));
            labels.push((*j, *k));
        }
    }
    Povm { elements, labels }
}

/// Born-rule outcome distribution `p_x = Tr[rho Pi_x]` over the 16 joint
/// outcomes.
pub fn outcome_probabilities(rho: &ComplexMatrix, povm: &Povm) -> Vec<f64> {
    povm.elements
        .iter()
        .map(|e| rho.trace_product_re(e))
        .collect()
}

/// Symmetric logarithmic derivative solving `2 d_rho = L rho + rho L` on
/// the support of rho.
///
/// Built in the eigenbasis of rho with matrix elements
/// `2 <s| d_rho |t> / (lambda_s + lambda_t)`; terms with eigenvalue sum at
/// or below the support cutoff are dropped. Rejects derivatives with
/// kernel-to-kernel weight above 1e-10, which would make the defining
/// equation unsolvable.
pub fn sld_operator(rho: &ComplexMatrix, d_rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = rho.dim();
    let eig = hermitian_eig(rho)?;
    // d_rho in the eigenbasis: V^dag d_rho V
    let d_eig = eig.vectors.dagger().mul(d_rho).mul(&eig.vectors);

    let mut kernel_weight = 0.0f64;
    let mut l_eig = ComplexMatrix::zeros(n);
    for s in 0..n {
        for t in 0..n {
            let denom = eig.values[s] + eig.values[t];
            if denom <= SLD_SUPPORT_CUTOFF {
                kernel_weight = kernel_weight.max(d_eig[(s, t)].norm());
                continue;
            }
            l_eig[(s, t)] = d_eig[(s, t)].scale(2.0 / denom);
        }
    }
    if kernel_weight > 1e-10 {
        return Err(Error::DerivativeLeavesSupport {
            weight: kernel_weight,
        });
    }
    Ok(eig.vectors.mul(&l_eig).mul(&eig.vectors.dagger()))
}

/// QFI matrix `Q_jk = Tr[rho (L_j L_k + L_k L_j)] / 2` from an explicit
/// state and derivative pair. Errors at the pure-state boundary are those
/// of [`sld_operator`].
pub fn qfi_from_state(rho: &ComplexMatrix, d_rho: [&ComplexMatrix; 2]) -> Result<SymMat2> {
    let l0 = sld_operator(rho, d_rho[0])?;
    let l1 = sld_operator(rho, d_rho[1])?;
    let q00 = rho.trace_product_re(&l0.mul(&l0));
    let q11 = rho.trace_product_re(&l1.mul(&l1));
    let sym = l0.mul(&l1).add(&l1.mul(&l0)).scaled(Complex64::new(0.5, 0.0));
    let q01 = rho.trace_product_re(&sym);
    Ok(SymMat2::new(q00, q01, q11))
}

/// QFI matrix of the probe state at a parameter point.
///
/// The joint matrix is singular at `phi1 = 0` where the dephasing row
/// vanishes identically; that point is rejected (use
/// [`qfi_phase_element`] for the phase sensitivity alone).
pub fn qfi_matrix(p: &PhaseParams, s: &SpectralParams) -> Result<SymMat2> {
    if p.phi1 == 0.0 {
        return Err(Error::SingularPoint {
            quantity: "QFI matrix",
        });
    }
    let rho = density_matrix(p, s);
    let d0 = density_derivative(p, s, 0);
    let d1 = density_derivative(p, s, 1);
    qfi_from_state(&rho, [&d0, &d1])
}

/// Phase-sensitivity QFI element `Q_00` alone; well defined for every
/// `phi1`, including the pure-state boundary.
pub fn qfi_phase_element(p: &PhaseParams, s: &SpectralParams) -> Result<f64> {
    let rho = density_matrix(p, s);
    let d0 = density_derivative(p, s, 0);
    let l0 = sld_operator(&rho, &d0)?;
    Ok(rho.trace_product_re(&l0.mul(&l0)))
}

/// Classical FI matrix from explicit outcome probabilities and their
/// parameter derivatives.
///
/// Outcomes with vanishing probability contribute nothing when their
/// derivative also vanishes; a vanishing probability with a surviving
/// derivative is a genuine divergence and is rejected.
pub fn fi_from_probabilities(probs: &[f64], dprobs: [&[f64]; 2]) -> Result<SymMat2> {
    let mut f = [[0.0f64; 2]; 2];
    for (x, &p) in probs.iter().enumerate() {
        if p <= 1e-14 {
            let worst = dprobs[0][x].abs().max(dprobs[1][x].abs());
            if worst > 1e-12 {
                return Err(Error::FiDivergence {
                    outcome: x,
                    prob: p,
                    dprob: worst,
                });
            }
            continue;
        }
        for j in 0..2 {
            for k in 0..2 {
                f[j][k] += dprobs[j][x] * dprobs[k][x] / p;
            }
        }
    }
    Ok(SymMat2::new(f[0][0], 0.5 * (f[0][1] + f[1][0]), f[1][1]))
}

/// Classical FI matrix of the Stokes measurement at a parameter point.
pub fn fi_matrix(p: &PhaseParams, s: &SpectralParams, povm: &Povm) -> Result<SymMat2> {
    let rho = density_matrix(p, s);
    let probs = outcome_probabilities(&rho, povm);
    let d0 = outcome_probabilities(&density_derivative(p, s, 0), povm);
    let d1 = outcome_probabilities(&density_derivative(p, s, 1), povm);
    fi_from_probabilities(&probs, [&d0, &d1])
}

/// Joint-estimation figure of merit `Upsilon = Tr[F Q^{-1}] <= 2`.
pub fn upsilon(f: &SymMat2, q: &SymMat2) -> Result<f64> {
    let q_inv = sym2_inverse(q).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::SingularPoint {
            quantity: "Upsilon (QFI not invertible)",
        },
        other => other,
    })?;
    Ok(f.trace_product(&q_inv))
}

/// Weak-commutativity scalar `Im Tr[rho [L_0, L_1]]`; zero is necessary
/// and sufficient for simultaneous attainability of both quantum bounds.
/// The real part vanishes for Hermitian inputs and is asserted at rounding
/// level.
pub fn weak_commutativity(p: &PhaseParams, s: &SpectralParams) -> Result<f64> {
    if p.phi1 == 0.0 {
        return Err(Error::SingularPoint {
            quantity: "weak commutativity",
        });
    }
    let rho = density_matrix(p, s);
    let l0 = sld_operator(&rho, &density_derivative(p, s, 0))?;
    let l1 = sld_operator(&rho, &density_derivative(p, s, 1))?;
    let w = commutator_trace(&rho, &l0, &l1);
    debug_assert!(w.re.abs() <= 1e-10, "real part {} above rounding", w.re);
    Ok(w.im)
}

/// QFI matrix, classical FI matrix, and the derived joint-estimation
/// scalars at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct FisherPair {
    pub q: SymMat2,
    pub f: SymMat2,
    pub upsilon: f64,
    pub weak_comm: f64,
}

/// Evaluate the full Fisher bundle at a parameter point.
pub fn fisher_pair(p: &PhaseParams, s: &SpectralParams, povm: &Povm) -> Result<FisherPair> {
    let q = qfi_matrix(p, s)?;
    let f = fi_matrix(p, s, povm)?;
    Ok(FisherPair {
        q,
        f,
        upsilon: upsilon(&f, &q)?,
        weak_comm: weak_commutativity(p, s)?,
    })
}
