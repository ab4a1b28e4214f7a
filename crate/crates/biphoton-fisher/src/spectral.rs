//! Gaussian joint spectral weight of the photon pair and its exponential
//! moments.
//!
//! The polarization state depends on the spectrum only through moments
//! `E[e^{i(a u + b v)}]` of the frequency detunings `u = w1 - w0`,
//! `v = w2 - w0`. For the Gaussian weight used here the detunings are
//! jointly normal with covariance `[[s^2, e s^2], [e s^2, s^2]]`, so the
//! moment has the closed form `exp(-(a^2 + b^2) s^2 / 2 - a b s^2 e)`.
//! A Gauss-Hermite quadrature oracle integrates the same moment from the
//! spectral weight directly.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Threshold beyond which |epsilon| is treated as exactly 1 and the
/// degenerate quadrature axis collapses to a single node.
const EPSILON_DEGENERATE: f64 = 1e-9;

/// Parameters of the Gaussian joint spectral weight.
///
/// `sigma` is the single-photon bandwidth, `epsilon` in [-1, 1] the
/// frequency-correlation parameter (-1 anti-correlated, 0 uncorrelated,
/// +1 correlated), `omega0` the central frequency. The widths of the sum
/// and difference quadratures are `2 sigma^2 (1 +- epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub sigma: f64,
    pub epsilon: f64,
    /// Central frequency; every traced quantity is expanded around it, so
    /// it cancels downstream. Kept for fidelity of the model description.
    pub omega0: f64,
}

impl SpectralParams {
    /// Validated constructor with `omega0 = 0`.
    pub fn new(sigma: f64, epsilon: f64) -> Result<Self> {
        if !(sigma > 0.0) || !(-1.0..=1.0).contains(&epsilon) || !sigma.is_finite() {
            return Err(Error::InvalidSpectralParams { sigma, epsilon });
        }
        Ok(Self {
            sigma,
            epsilon,
            omega0: 0.0,
        })
    }

    pub fn with_omega0(mut self, omega0: f64) -> Self {
        self.omega0 = omega0;
        self
    }

    /// Variance of the sum quadrature (u + v)/sqrt(2).
    pub fn sum_variance(&self) -> f64 {
        self.sigma * self.sigma * (1.0 + self.epsilon)
    }

    /// Variance of the difference quadrature (u - v)/sqrt(2).
    pub fn diff_variance(&self) -> f64 {
        self.sigma * self.sigma * (1.0 - self.epsilon)
    }
}

/// Closed-form moment `E[e^{i(a u + b v)}]` of the detunings.
///
/// Real and positive for this centered Gaussian weight; phases are applied
/// downstream. Continuous up to and including `epsilon = +-1`.
pub fn moment(params: &SpectralParams, a: f64, b: f64) -> f64 {
    let s2 = params.sigma * params.sigma;
    (-(a * a + b * b) * s2 / 2.0 - a * b * s2 * params.epsilon).exp()
}

/// Derivative of `moment(p, phi1, c * phi1)` with respect to `phi1`, for
/// the three coherence channels c in {0, +1, -1} used by the probe state.
pub fn moment_dphi1(params: &SpectralParams, phi1: f64, channel: f64) -> f64 {
    let s2 = params.sigma * params.sigma;
    let m = moment(params, phi1, channel * phi1);
    // d/dphi1 exp(-(1 + c^2) phi1^2 s2 / 2 - c phi1^2 s2 e)
    -phi1 * s2 * ((1.0 + channel * channel) + 2.0 * channel * params.epsilon) * m
}

/// Nodes and weights of `order`-point Gauss-Hermite quadrature for the
/// weight `e^{-x^2}` on the real line.
///
/// Newton iteration on the orthonormal Hermite recurrence with
/// Christoffel-number weights; nodes are symmetrized exactly.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 2, "need at least two nodes");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];

    // Orthonormal Hermite value and derivative at x.
    let eval = |x: f64| -> (f64, f64, f64) {
        // h0 = pi^{-1/4}, h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}
        let mut hm = 0.0f64;
        let mut h = std::f64::consts::PI.powf(-0.25);
        let mut sumsq = h * h;
        for k in 0..n {
            let hn = x * (2.0 / (k as f64 + 1.0)).sqrt() * h
                - ((k as f64) / (k as f64 + 1.0)).sqrt() * hm;
            hm = h;
            h = hn;
            if k + 1 < n {
                sumsq += h * h;
            }
        }
        // h = h_n, hm = h_{n-1}; h_n'(x) = sqrt(2n) h_{n-1}(x)
        let dh = (2.0 * n as f64).sqrt() * hm;
        (h, dh, sumsq)
    };

    // Initial guesses for the positive roots, largest first (classic
    // asymptotic seeds), then Newton.
    let m = n / 2 + n % 2;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => {
                let a = (2.0 * n as f64 + 1.0).sqrt();
                a - 1.85575 * a.powf(-1.0 / 3.0)
            }
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[n - 1],
            3 => 1.91 * z - 0.91 * nodes[n - 2],
            _ => 2.0 * z - nodes[n - i + 1],
        };
        for _ in 0..100 {
            let (h, dh, _) = eval(z);
            let step = h / dh;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, _, sumsq) = eval(z);
        let w = 1.0 / sumsq;
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, _, sumsq) = eval(0.0);
        weights[n / 2] = 1.0 / sumsq;
    }
    (nodes, weights)
}

/// Quadrature oracle for [`moment`]: integrates `e^{i(a u + b v)}` against
/// the spectral weight with `order` Gauss-Hermite nodes per axis.
///
/// The weight factorizes in the rotated coordinates `(u + v)/sqrt(2)` and
/// `(u - v)/sqrt(2)`, so the double integral splits into two 1-D sums.
/// When |epsilon| exceeds 1 - 1e-9 the vanishing axis collapses to a
/// single node (delta-function limit).
pub fn quadrature_moment(params: &SpectralParams, a: f64, b: f64, order: usize) -> Complex64 {
    assert!(order >= 20, "oracle needs order >= 20");
    let (nodes, weights) = gauss_hermite(order);
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();

    // E[e^{i k q}] for q ~ N(0, tau2), via nodes of e^{-x^2}: q = sqrt(2 tau2) x.
    let axis = |k: f64, tau2: f64, degenerate: bool| -> Complex64 {
        if degenerate || tau2 <= 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let scale = (2.0 * tau2).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let phase = k * scale * x;
            acc += Complex64::new(w * phase.cos(), w * phase.sin());
        }
        acc * inv_sqrt_pi
    };

    let sum_degenerate = params.epsilon < -1.0 + EPSILON_DEGENERATE;
    let diff_degenerate = params.epsilon > 1.0 - EPSILON_DEGENERATE;
    let ks = (a + b) / std::f64::consts::SQRT_2;
    let kd = (a - b) / std::f64::consts::SQRT_2;
    axis(ks, params.sum_variance(), sum_degenerate) * axis(kd, params.diff_variance(), diff_degenerate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn constructor_validates() {
        assert!(SpectralParams::new(1.0, 0.3).is_ok());
        assert!(SpectralParams::new(0.0, 0.3).is_err());
        assert!(SpectralParams::new(-1.0, 0.3).is_err());
        assert!(SpectralParams::new(1.0, 1.2).is_err());
        assert!(SpectralParams::new(1.0, -1.0).is_ok());
        let s = SpectralParams::new(2.0, -1.0).unwrap();
        assert_abs_diff_eq!(s.sum_variance(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.diff_variance(), 8.0, epsilon = 1e-15);
    }

    #[test]
    fn moment_normalization() {
        for eps in [-1.0, -0.4, 0.0, 0.7, 1.0] {
            let s = SpectralParams::new(1.0, eps).unwrap();
            assert_abs_diff_eq!(moment(&s, 0.0, 0.0), 1.0, epsilon = 0.0);
        }
    }

    #[test]
    fn moment_perfect_correlation_limit() {
        // At eps = 1, u - v is deterministic: the exponent cancels exactly.
        let s = SpectralParams::new(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(moment(&s, 1.0, -1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn moment_against_quadrature_oracle() {
        let s = SpectralParams::new(1.0, 0.0).unwrap();
        let m = moment(&s, 1.0, 0.0);
        assert_abs_diff_eq!(m, (-0.5f64).exp(), epsilon = 1e-12);
        let q = quadrature_moment(&s, 1.0, 0.0, 40);
        assert!((Complex64::new(m, 0.0) - q).norm() <= 1e-8);
    }

    #[test]
    fn quadrature_trivial_and_closed_form() {
        let s0 = SpectralParams::new(1.0, 0.0).unwrap();
        let q = quadrature_moment(&s0, 0.0, 0.0, 40);
        assert!((q - Complex64::new(1.0, 0.0)).norm() <= 1e-12);

        let s = SpectralParams::new(1.0, 0.5).unwrap();
        let q = quadrature_moment(&s, 1.0, 1.0, 40);
        assert!((q - Complex64::new((-1.5f64).exp(), 0.0)).norm() <= 1e-10);

        // Anti-correlated delta limit: 1D quadrature on the surviving axis.
        let sm = SpectralParams::new(1.0, -1.0).unwrap();
        let q = quadrature_moment(&sm, 1.0, 1.0, 40);
        assert!((q - Complex64::new(1.0, 0.0)).norm() <= 1e-8);
    }

    #[test]
    fn gauss_hermite_moments() {
        for order in [20, 40, 61] {
            let (x, w) = gauss_hermite(order);
            let sqrt_pi = std::f64::consts::PI.sqrt();
            let m0: f64 = w.iter().sum();
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
            assert_abs_diff_eq!(m0, sqrt_pi, epsilon = 1e-12);
            assert_abs_diff_eq!(m2, sqrt_pi / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m4, 3.0 * sqrt_pi / 4.0, epsilon = 1e-11);
            // symmetry of the rule
            for i in 0..order {
                assert_abs_diff_eq!(x[i], -x[order - 1 - i], epsilon = 1e-14);
                assert_abs_diff_eq!(w[i], w[order - 1 - i], epsilon = 1e-14);
            }
        }
    }

    /// Largest exponent magnitude of the two factorized axes; the default
    /// order 40 resolves exponents up to ~25 well below 1e-8.
    fn worst_exponent(s: &SpectralParams, a: f64, b: f64) -> f64 {
        let es = 0.25 * (a + b).powi(2) * s.sum_variance();
        let ed = 0.25 * (a - b).powi(2) * s.diff_variance();
        es.max(ed)
    }

    #[test]
    fn quadrature_default_order_resolves_sweep_domain() {
        // Everything the probe state ever asks for has arguments
        // (phi1, 0) or (phi1, +-phi1) with phi1 <= 3, i.e. exponents <= 25
        // in the sweep domain; order 40 resolves all of it below 1e-8.
        let points: [(f64, f64, f64, f64); 8] = [
            (1.0, 0.0, 1.0, 0.0),
            (1.0, 0.5, 1.0, 1.0),
            (1.0, -0.5, 2.0, -1.5),
            (1.0, 0.9, 3.0, 2.0),
            (1.0, 1.0, 3.0, 3.0),
            (0.5, 0.3, 5.0, -5.0),
            (0.5, -1.0, 7.0, 7.0),
            (2.0, -0.7, 2.0, 1.0),
        ];
        for (sigma, eps, a, b) in points {
            let s = SpectralParams::new(sigma, eps).unwrap();
            assert!(worst_exponent(&s, a, b) <= 25.0 + 1e-9);
            let exact = Complex64::new(moment(&s, a, b), 0.0);
            let r40 = (quadrature_moment(&s, a, b, 40) - exact).norm();
            assert!(r40 <= 1e-8, "r40 = {r40:.2e} at {sigma},{eps},{a},{b}");
        }
    }

    #[test]
    fn quadrature_order80_covers_full_argument_domain() {
        // The corner of the |a|,|b| <= 5/sigma domain with aligned signs
        // and eps -> 1 pushes the exponent to 50; order 80 still agrees to
        // 1e-8 there.
        let corners: [(f64, f64, f64, f64); 4] = [
            (1.0, 1.0 - 1e-12, 5.0, 5.0),
            (1.0, -1.0 + 1e-12, 5.0, -5.0),
            (0.5, 0.999, 10.0, 10.0),
            (2.0, 0.8, 2.5, 2.5),
        ];
        for (sigma, eps, a, b) in corners {
            let s = SpectralParams::new(sigma, eps).unwrap();
            let exact = Complex64::new(moment(&s, a, b), 0.0);
            let r80 = (quadrature_moment(&s, a, b, 80) - exact).norm();
            assert!(r80 <= 1e-8, "r80 = {r80:.2e} at {sigma},{eps},{a},{b}");
        }
    }

    #[test]
    fn quadrature_converges_with_order() {
        // Residuals never grow from order 20 to 60, and both sit below
        // 1e-8 once order 20 resolves the exponent (<= ~4).
        let points: [(f64, f64, f64, f64); 5] = [
            (1.0, 0.0, 1.0, 0.0),
            (1.0, 0.5, 1.0, 1.0),
            (1.0, -0.5, 1.0, -1.0),
            (1.0, 0.9, 3.0, 2.0),
            (1.0, 1.0 - 1e-12, 5.0, 5.0),
        ];
        for (sigma, eps, a, b) in points {
            let s = SpectralParams::new(sigma, eps).unwrap();
            let exact = Complex64::new(moment(&s, a, b), 0.0);
            let r20 = (quadrature_moment(&s, a, b, 20) - exact).norm();
            let r60 = (quadrature_moment(&s, a, b, 60) - exact).norm();
            assert!(r60 <= r20 + 1e-15, "no convergence: r20={r20:.2e} r60={r60:.2e}");
            if worst_exponent(&s, a, b) <= 4.0 {
                assert!(r20 <= 1e-8, "r20 = {r20:.2e} at {sigma},{eps},{a},{b}");
                assert!(r60 <= 1e-8, "r60 = {r60:.2e} at {sigma},{eps},{a},{b}");
            }
        }
    }

    proptest! {
        #[test]
        fn moment_symmetry_and_bound(
            sigma in 0.3f64..2.0,
            eps in -1.0f64..1.0,
            a in -4.0f64..4.0,
            b in -4.0f64..4.0,
        ) {
            let s = SpectralParams::new(sigma, eps).unwrap();
            let m = moment(&s, a, b);
            prop_assert!(m <= 1.0 + 1e-15);
            prop_assert!(m > 0.0);
            prop_assert!((m - moment(&s, b, a)).abs() < 1e-15);
            // flipping one detuning's sign is the same as flipping epsilon
            let s_neg = SpectralParams::new(sigma, -eps).unwrap();
            prop_assert!((m - moment(&s_neg, a, -b)).abs() < 1e-15);
        }

        #[test]
        fn quadrature_matches_moment(
            eps in -0.95f64..0.95,
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let s = SpectralParams::new(1.0, eps).unwrap();
            let exact = Complex64::new(moment(&s, a, b), 0.0);
            let q = quadrature_moment(&s, a, b, 40);
            prop_assert!((q - exact).norm() <= 1e-8);
        }

        #[test]
        fn moment_dphi1_matches_finite_difference(
            eps in -1.0f64..1.0,
            sigma in 0.5f64..2.0,
            phi1 in 0.01f64..3.0,
            channel in prop::sample::select(vec![0.0f64, 1.0, -1.0]),
        ) {
            let s = SpectralParams::new(sigma, eps).unwrap();
            let h = 1e-5;
            let fd = (moment(&s, phi1 + h, channel * (phi1 + h))
                - moment(&s, phi1 - h, channel * (phi1 - h))) / (2.0 * h);
            let an = moment_dphi1(&s, phi1, channel);
            prop_assert!((fd - an).abs() < 1e-7, "fd={fd} analytic={an}");
        }
    }
}
