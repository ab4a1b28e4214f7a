//! Statistical verification of the Cramér-Rao chain: sample joint Stokes
//! outcomes, fit maximum-likelihood estimates of (phi0, phi1), and compare
//! the empirical covariance against F^{-1}/M and Q^{-1}/M.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{outcome_probabilities, stokes_povm, Povm};
use crate::linalg::SymMat2;
use crate::probe::{density_matrix, PhaseParams};
use crate::spectral::SpectralParams;

/// Identifiable region of the likelihood: phi0 within one period, phi1
/// positive (the probabilities are even in phi1, so its sign is not
/// identifiable).
pub const PHI0_BOUNDS: (f64, f64) = (0.0, std::f64::consts::FRAC_PI_2);
pub const PHI1_BOUNDS: (f64, f64) = (0.05, 3.0);

/// Counts over the 16 joint Stokes outcomes from one simulated run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeRecord {
    pub counts: [u64; 16],
    pub shots: u64,
    pub seed: u64,
}

impl OutcomeRecord {
    /// Empirical frequencies count/shots.
    pub fn frequencies(&self) -> [f64; 16] {
        let mut f = [0.0; 16];
        for (fi, &c) in f.iter_mut().zip(self.counts.iter()) {
            *fi = c as f64 / self.shots as f64;
        }
        f
    }
}

/// One Monte-Carlo estimation campaign at a fixed parameter point.
#[derive(Debug, Clone)]
pub struct EstimationRun {
    pub true_params: PhaseParams,
    pub estimates: Vec<PhaseParams>,
    pub empirical_cov: SymMat2,
}

/// Multinomial draw of `shots` joint Stokes outcomes, reproducible for a
/// fixed seed (conditional-binomial decomposition over a seeded stream).
pub fn sample_outcomes(
    p: &PhaseParams,
    s: &SpectralParams,
    shots: u64,
    seed: u64,
) -> OutcomeRecord {
    assert!(shots >= 1, "need at least one shot");
    let povm = stokes_povm();
    let probs = outcome_probabilities(&density_matrix(p, s), &povm);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 16];
    let mut remaining = shots;
    let mut rest = 1.0f64;
    for x in 0..15 {
        if remaining == 0 {
            break;
        }
        let p_cond = if rest > 0.0 {
            (probs[x] / rest).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = if p_cond >= 1.0 {
            remaining
        } else if p_cond <= 0.0 {
            0
        } else {
            Binomial::new(remaining, p_cond).unwrap().sample(&mut rng)
        };
        counts[x] = draw;
        remaining -= draw;
        rest -= probs[x];
    }
    counts[15] = remaining;
    OutcomeRecord {
        counts,
        shots,
        seed,
    }
}

/// Negative log-likelihood of weighted counts under the model.
fn negative_log_likelihood(
    weights: &[f64; 16],
    s: &SpectralParams,
    povm: &Povm,
    phi0: f64,
    phi1: f64,
) -> f64 {
    if phi0 <= PHI0_BOUNDS.0
        || phi0 >= PHI0_BOUNDS.1
        || phi1 <= PHI1_BOUNDS.0
        || phi1 >= PHI1_BOUNDS.1
    {
        return f64::INFINITY;
    }
    let probs = outcome_probabilities(&density_matrix(&PhaseParams::new(phi0, phi1), s), povm);
    let mut nll = 0.0;
    for (w, p) in weights.iter().zip(probs.iter()) {
        if *w > 0.0 {
            nll -= w * p.max(1e-300).ln();
        }
    }
    nll
}

/// Nelder-Mead on two parameters; deterministic, returns (point, value).
fn nelder_mead<F: Fn(f64, f64) -> f64>(
    f: &F,
    start: (f64, f64),
    scale: (f64, f64),
) -> ((f64, f64), f64) {
    const MAX_ITER: usize = 600;
    let mut simplex = [
        start,
        (start.0 + scale.0, start.1),
        (start.0, start.1 + scale.1),
    ];
    let mut values = [
        f(simplex[0].0, simplex[0].1),
        f(simplex[1].0, simplex[1].1),
        f(simplex[2].0, simplex[2].1),
    ];

    for _ in 0..MAX_ITER {
        // order ascending by value
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        values = [values[idx[0]], values[idx[1]], values[idx[2]]];

        let spread = (simplex[0].0 - simplex[2].0).abs().max(
            (simplex[0].1 - simplex[2].1)
                .abs()
                .max((simplex[0].0 - simplex[1].0).abs())
                .max((simplex[0].1 - simplex[1].1).abs()),
        );
        let f_spread = (values[2] - values[0]).abs();
        if spread < 1e-8 && (f_spread < 1e-10 || !f_spread.is_finite()) {
            break;
        }

        let centroid = (
            0.5 * (simplex[0].0 + simplex[1].0),
            0.5 * (simplex[0].1 + simplex[1].1),
        );
        let worst = simplex[2];
        let reflect = (
            centroid.0 + (centroid.0 - worst.0),
            centroid.1 + (centroid.1 - worst.1),
        );
        let f_reflect = f(reflect.0, reflect.1);

        if f_reflect < values[0] {
            // try expansion
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0),
                centroid.1 + 2.0 * (centroid.1 - worst.1),
            );
            let f_expand = f(expand.0, expand.1);
            if f_expand < f_reflect {
                simplex[2] = expand;
                values[2] = f_expand;
            } else {
                simplex[2] = reflect;
                values[2] = f_reflect;
            }
        } else if f_reflect < values[1] {
            simplex[2] = reflect;
            values[2] = f_reflect;
        } else {
            // contraction (outside if the reflection helped at all)
            let toward = if f_reflect < values[2] { reflect } else { worst };
            let contract = (
                centroid.0 + 0.5 * (toward.0 - centroid.0),
                centroid.1 + 0.5 * (toward.1 - centroid.1),
            );
            let f_contract = f(contract.0, contract.1);
            if f_contract < values[2].min(f_reflect) {
                simplex[2] = contract;
                values[2] = f_contract;
            } else {
                // shrink toward the best vertex
                for k in 1..3 {
                    simplex[k] = (
                        simplex[0].0 + 0.5 * (simplex[k].0 - simplex[0].0),
                        simplex[0].1 + 0.5 * (simplex[k].1 - simplex[0].1),
                    );
                    values[k] = f(simplex[k].0, simplex[k].1);
                }
            }
        }
    }

    let mut best = 0;
    for k in 1..3 {
        if values[k] < values[best] {
            best = k;
        }
    }
    (simplex[best], values[best])
}

/// Maximum-likelihood fit of fractional (weighted) counts; the workhorse
/// behind [`mle_fit`], also usable with idealized records `M * p`.
pub fn mle_fit_weighted(
    weights: &[f64; 16],
    s: &SpectralParams,
    init: PhaseParams,
) -> Result<PhaseParams> {
    let povm = stokes_povm();
    let objective = |phi0: f64, phi1: f64| negative_log_likelihood(weights, s, &povm, phi0, phi1);

    // Truth-seeded plus fixed grid seeds to flush out secondary maxima.
    let starts = [
        (init.phi0, init.phi1),
        (std::f64::consts::FRAC_PI_8, 0.5),
        (std::f64::consts::FRAC_PI_4, 1.5),
        (3.0 * std::f64::consts::FRAC_PI_8, 2.5),
    ];
    let mut best: Option<((f64, f64), f64)> = None;
    for (k, start) in starts.iter().enumerate() {
        let scale = if k == 0 { (0.02, 0.05) } else { (0.1, 0.2) };
        let clamped = (
            start
                .0
                .clamp(PHI0_BOUNDS.0 + 1e-3, PHI0_BOUNDS.1 - 1e-3),
            start
                .1
                .clamp(PHI1_BOUNDS.0 + 1e-3, PHI1_BOUNDS.1 - 1e-3),
        );
        let (point, value) = nelder_mead(&objective, clamped, scale);
        if best.as_ref().map_or(true, |(_, v)| value < *v) {
            best = Some((point, value));
        }
    }
    let ((phi0, phi1), value) = best.unwrap();

    // The optimum must improve on the initial guess and stay interior.
    debug_assert!(value <= objective(init.phi0, init.phi1) + 1e-9);
    let edge = 1e-6;
    if phi0 - PHI0_BOUNDS.0 < edge
        || PHI0_BOUNDS.1 - phi0 < edge
        || phi1 - PHI1_BOUNDS.0 < edge
        || PHI1_BOUNDS.1 - phi1 < edge
    {
        return Err(Error::BoundaryFit { phi0, phi1 });
    }
    Ok(PhaseParams::new(phi0, phi1))
}

/// Maximum-likelihood estimate of (phi0, phi1) from an outcome record,
/// seeded at `init` inside the identifiable region.
pub fn mle_fit(record: &OutcomeRecord, s: &SpectralParams, init: PhaseParams) -> Result<PhaseParams> {
    if record.shots == 0 {
        return Err(Error::TooFewEstimates { count: 0 });
    }
    let mut weights = [0.0f64; 16];
    for (w, &c) in weights.iter_mut().zip(record.counts.iter()) {
        *w = c as f64;
    }
    mle_fit_weighted(&weights, s, init)
}

/// Unbiased sample covariance of a set of estimates.
pub fn empirical_covariance(estimates: &[PhaseParams]) -> Result<SymMat2> {
    let n = estimates.len();
    if n < 2 {
        return Err(Error::TooFewEstimates { count: n });
    }
    let nf = n as f64;
    let mean0 = estimates.iter().map(|e| e.phi0).sum::<f64>() / nf;
    let mean1 = estimates.iter().map(|e| e.phi1).sum::<f64>() / nf;
    let mut c00 = 0.0;
    let mut c01 = 0.0;
    let mut c11 = 0.0;
    for e in estimates {
        let d0 = e.phi0 - mean0;
        let d1 = e.phi1 - mean1;
        c00 += d0 * d0;
        c01 += d0 * d1;
        c11 += d1 * d1;
    }
    let denom = nf - 1.0;
    Ok(SymMat2::new(c00 / denom, c01 / denom, c11 / denom))
}

/// Run `repeats` independent simulate-and-fit cycles at one parameter
/// point. Repeat `r` draws from the stream seeded with `seed + r`, so the
/// campaign is reproducible end-to-end and parallelizes over repeats.
pub fn run_estimation(
    p: &PhaseParams,
    s: &SpectralParams,
    shots: u64,
    repeats: u64,
    seed: u64,
) -> Result<EstimationRun> {
    let estimates: Vec<PhaseParams> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let record = sample_outcomes(p, s, shots, seed.wrapping_add(r));
            mle_fit(&record, s, *p)
        })
        .collect::<Result<Vec<_>>>()?;
    let empirical_cov = empirical_covariance(&estimates)?;
    Ok(EstimationRun {
        true_params: *p,
        estimates,
        empirical_cov,
    })
}
