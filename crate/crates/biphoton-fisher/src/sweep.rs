//! Parameter sweeps over the correlation grid and Monte-Carlo campaigns,
//! emitted as deterministic CSV.
//!
//! Sweep CSV schema (bit-exact): header
//! `quantity,phi0,phi1,epsilon,sigma,value,status`, values with 12
//! significant digits, `.` decimal separator, LF line endings, UTF-8.
//! Singular points carry status `singular` and an empty value field.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::estimation::{fi_matrix, qfi_matrix, qfi_phase_element, stokes_povm, upsilon, weak_commutativity};
use crate::linalg::sym2_inverse;
use crate::monte_carlo::run_estimation;
use crate::probe::{stokes_correlator, PhaseParams};
use crate::spectral::SpectralParams;

/// What a sweep evaluates at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Qfi00,
    Qfi11,
    Fi00,
    Fi11,
    Upsilon,
    WeakComm,
    StokesXx,
    MonteCarlo,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Qfi00,
        Quantity::Qfi11,
        Quantity::Fi00,
        Quantity::Fi11,
        Quantity::Upsilon,
        Quantity::WeakComm,
        Quantity::StokesXx,
        Quantity::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Qfi00 => "qfi00",
            Quantity::Qfi11 => "qfi11",
            Quantity::Fi00 => "fi00",
            Quantity::Fi11 => "fi11",
            Quantity::Upsilon => "upsilon",
            Quantity::WeakComm => "weak_comm",
            Quantity::StokesXx => "stokes_xx",
            Quantity::MonteCarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "invalid quantity name {s:?}; expected one of {}",
                    Quantity::ALL.map(|q| q.name()).join(", ")
                ))
            })
    }
}

/// Inclusive epsilon grid: `steps` evenly spaced points from min to max.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct EpsilonGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl EpsilonGrid {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.min + step * i as f64).collect()
    }
}

impl Default for EpsilonGrid {
    fn default() -> Self {
        Self {
            min: -1.0,
            max: 1.0,
            steps: 81,
        }
    }
}

/// Monte-Carlo block: shots per record, repeats per point, base seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct McConfig {
    pub shots: u64,
    pub repeats: u64,
    pub seed: u64,
}

/// Full sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub epsilon_grid: EpsilonGrid,
    pub phi1_list: Vec<f64>,
    pub phi0: f64,
    pub sigma: f64,
    pub mc: Option<McConfig>,
    pub output_path: PathBuf,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon_grid.steps < 2 {
            return Err(Error::Config(format!(
                "epsilon grid needs at least 2 steps, got {}",
                self.epsilon_grid.steps
            )));
        }
        let (lo, hi) = (self.epsilon_grid.min, self.epsilon_grid.max);
        if !(-1.0..=1.0).contains(&lo) || !(-1.0..=1.0).contains(&hi) || lo >= hi {
            return Err(Error::Config(format!(
                "epsilon grid [{lo}, {hi}] must be increasing and within [-1, 1]"
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Config(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.phi1_list.is_empty() {
            return Err(Error::Config("phi1 list must not be empty".into()));
        }
        if self.quantity == Quantity::MonteCarlo && self.mc.is_none() {
            return Err(Error::Config(
                "montecarlo runs need an mc block (shots, repeats, seed)".into(),
            ));
        }
        Ok(())
    }
}

/// Format with 12 significant digits in scientific notation; deterministic
/// across runs and platforms.
pub fn format_value(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{x:.11e}")
}

/// One evaluated sweep row.
#[derive(Debug, Clone)]
struct SweepRow {
    phi1: f64,
    epsilon: f64,
    value: Option<f64>,
}

fn evaluate(quantity: Quantity, p: &PhaseParams, s: &SpectralParams) -> Result<Option<f64>> {
    let singular = |e: Error| match e {
        Error::SingularPoint { .. } => Ok(None),
        other => Err(other),
    };
    match quantity {
        Quantity::Qfi00 => qfi_phase_element(p, s).map(Some),
        Quantity::Qfi11 => match qfi_matrix(p, s) {
            Ok(q) => Ok(Some(q.m11)),
            Err(e) => singular(e),
        },
        Quantity::Fi00 => fi_matrix(p, s, &stokes_povm()).map(|f| Some(f.m00)),
        Quantity::Fi11 => fi_matrix(p, s, &stokes_povm()).map(|f| Some(f.m11)),
        Quantity::Upsilon => {
            let f = fi_matrix(p, s, &stokes_povm())?;
            match qfi_matrix(p, s).and_then(|q| upsilon(&f, &q)) {
                Ok(u) => Ok(Some(u)),
                Err(e) => singular(e),
            }
        }
        Quantity::WeakComm => match weak_commutativity(p, s) {
            Ok(w) => Ok(Some(w)),
            Err(e) => singular(e),
        },
        Quantity::StokesXx => Ok(Some(stokes_correlator(p, s))),
        Quantity::MonteCarlo => Err(Error::Config(
            "montecarlo is driven by run_montecarlo, not run_sweep".into(),
        )),
    }
}

/// Evaluate a sweep and return the CSV contents as a string.
///
/// Rows are sorted by (phi1, epsilon); grid points are evaluated by the
/// current rayon pool but assembled in deterministic order.
pub fn sweep_csv(config: &SweepConfig) -> Result<String> {
    config.validate()?;
    if config.quantity == Quantity::MonteCarlo {
        return Err(Error::Config(
            "use the montecarlo entry point for quantity = montecarlo".into(),
        ));
    }
    let mut phi1_sorted = config.phi1_list.clone();
    phi1_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eps_points = config.epsilon_grid.points();

    let points: Vec<(f64, f64)> = phi1_sorted
        .iter()
        .flat_map(|&phi1| eps_points.iter().map(move |&e| (phi1, e)))
        .collect();

    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(phi1, epsilon)| -> Result<SweepRow> {
            let p = PhaseParams::new(config.phi0, phi1);
            let s = SpectralParams::new(config.sigma, epsilon.clamp(-1.0, 1.0))?;
            let value = evaluate(config.quantity, &p, &s)?;
            Ok(SweepRow {
                phi1,
                epsilon,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = String::from("quantity,phi0,phi1,epsilon,sigma,value,status\n");
    for row in &rows {
        let (value, status) = match row.value {
            Some(v) => (format_value(v), "ok"),
            None => (String::new(), "singular"),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            config.quantity,
            format_value(config.phi0),
            format_value(row.phi1),
            format_value(row.epsilon),
            format_value(config.sigma),
            value,
            status
        ));
    }
    Ok(out)
}

/// True when the sweep hit at least one singular grid point (phi1 = 0 for
/// the joint quantities); used by the CLI in strict mode.
pub fn csv_has_singular_rows(csv: &str) -> bool {
    csv.lines().any(|l| l.ends_with(",singular"))
}

/// Run a sweep and write the CSV to the configured output path.
pub fn run_sweep(config: &SweepConfig) -> Result<String> {
    let csv = sweep_csv(config)?;
    write_output(&config.output_path, &csv)?;
    Ok(csv)
}

/// Monte-Carlo campaign CSV: one row per (phi1, epsilon) point with the
/// scaled empirical variances next to the inverse-Fisher references.
pub fn montecarlo_csv(config: &SweepConfig) -> Result<String> {
    config.validate()?;
    let mc = config.mc.ok_or_else(|| {
        Error::Config("montecarlo runs need an mc block (shots, repeats, seed)".into())
    })?;
    if mc.repeats < 2 {
        return Err(Error::TooFewEstimates {
            count: mc.repeats as usize,
        });
    }
    if mc.shots == 0 {
        return Err(Error::Config("mc shots must be at least 1".into()));
    }
    let mut phi1_sorted = config.phi1_list.clone();
    phi1_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eps_points = config.epsilon_grid.points();
    let povm = stokes_povm();

    let mut out = String::from(
        "phi0,phi1,epsilon,sigma,shots,repeats,seed,mvar_phi0,mvar_phi1,finv00,finv11,qinv00,qinv11\n",
    );
    for &phi1 in &phi1_sorted {
        for &epsilon in &eps_points {
            let p = PhaseParams::new(config.phi0, phi1);
            let s = SpectralParams::new(config.sigma, epsilon.clamp(-1.0, 1.0))?;
            let f_inv = sym2_inverse(&fi_matrix(&p, &s, &povm)?)?;
            let q_inv = sym2_inverse(&qfi_matrix(&p, &s)?)?;
            let run = run_estimation(&p, &s, mc.shots, mc.repeats, mc.seed)?;
            let m = mc.shots as f64;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                format_value(config.phi0),
                format_value(phi1),
                format_value(epsilon),
                format_value(config.sigma),
                mc.shots,
                mc.repeats,
                mc.seed,
                format_value(m * run.empirical_cov.m00),
                format_value(m * run.empirical_cov.m11),
                format_value(f_inv.m00),
                format_value(f_inv.m11),
                format_value(q_inv.m00),
                format_value(q_inv.m11),
            ));
        }
    }
    Ok(out)
}

/// Run a Monte-Carlo campaign and write the CSV to the output path.
pub fn run_montecarlo(config: &SweepConfig) -> Result<String> {
    let csv = montecarlo_csv(config)?;
    write_output(&config.output_path, &csv)?;
    Ok(csv)
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(contents.as_bytes())?;
    Ok(())
}
