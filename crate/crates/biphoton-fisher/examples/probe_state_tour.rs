//! Build the two-photon polarization state at a few parameter points and
//! inspect its structure: coherences, spectrum, purity, and the Stokes
//! correlator.
//!
//! Run with `cargo run --release --example probe_state_tour`.

use biphoton_fisher::*;
use std::f64::consts::FRAC_PI_4;

fn print_state(label: &str, p: PhaseParams, s: SpectralParams) {
    let rho = density_matrix(&p, &s);
    println!("\n{label}");
    println!(
        "  phi0 = {:.4}, phi1 = {:.2}, epsilon = {:+.2}, sigma = {:.2}",
        p.phi0, p.phi1, s.epsilon, s.sigma
    );
    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| {
                let z = rho[(i, j)];
                format!("{:+.4}{:+.4}i", z.re, z.im)
            })
            .collect();
        println!("    [{}]", row.join("  "));
    }
    let eig = hermitian_eig(&rho).unwrap();
    let purity = rho.trace_product_re(&rho);
    println!(
        "  spectrum: [{}]",
        eig.values
            .iter()
            .map(|v| format!("{v:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "  purity Tr[rho^2] = {purity:.6},  <X1 X2> = {:+.6}",
        stokes_correlator(&p, &s)
    );
}

fn main() {
    // No phase, no dephasing: the pure |DD><DD| state.
    print_state(
        "pure diagonal-polarized pair (phi1 = 0)",
        PhaseParams::new(0.0, 0.0),
        SpectralParams::new(1.0, 0.0).unwrap(),
    );

    // Moderate dephasing, uncorrelated spectrum: a product of two
    // identical partially-dephased qubits.
    print_state(
        "uncorrelated photons under dephasing",
        PhaseParams::new(FRAC_PI_4, 1.0),
        SpectralParams::new(1.0, 0.0).unwrap(),
    );

    // Perfectly correlated spectrum: the difference coherence HV<->VH
    // survives any amount of dephasing.
    print_state(
        "correlated photons, strong dephasing (decoherence-free difference coherence)",
        PhaseParams::new(FRAC_PI_4, 5.0),
        SpectralParams::new(1.0, 1.0).unwrap(),
    );

    // Anti-correlated spectrum: the sum coherence HH<->VV survives
    // instead, which is what keeps the phase information alive.
    print_state(
        "anti-correlated photons, strong dephasing (decoherence-free sum coherence)",
        PhaseParams::new(FRAC_PI_4, 5.0),
        SpectralParams::new(1.0, -1.0).unwrap(),
    );
}
