//! Thin command-line front end over the sweep library: `sweep` evaluates
//! one estimation quantity over the correlation grid, `montecarlo` runs a
//! Cramér-Rao verification campaign. Configuration comes from flags, a
//! TOML file, or both (flags win).

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use biphoton_fisher::sweep::{csv_has_singular_rows, montecarlo_csv, sweep_csv};
use biphoton_fisher::{EpsilonGrid, Error, McConfig, Quantity, SweepConfig};

#[derive(Parser)]
#[command(
    name = "biphoton-fisher",
    about = "Phase/dephasing estimation sweeps for frequency-correlated photon pairs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an estimation quantity over the correlation grid, one CSV row per point
    Sweep(RunArgs),
    /// Sample Stokes outcomes, fit maximum-likelihood estimates, compare against the bounds
    Montecarlo(RunArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML config file; explicit flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Quantity to sweep: qfi00, qfi11, fi00, fi11, upsilon, weak_comm, stokes_xx, montecarlo
    #[arg(long)]
    quantity: Option<String>,
    /// Mean phase in radians (default pi/4)
    #[arg(long)]
    phi0: Option<f64>,
    /// Mean phase as the multiple k of pi/4
    #[arg(long, conflicts_with = "phi0")]
    phi0_k: Option<i64>,
    /// Dephasing slopes, comma separated
    #[arg(long, value_delimiter = ',')]
    phi1: Option<Vec<f64>>,
    /// Lower edge of the correlation grid
    #[arg(long)]
    eps_min: Option<f64>,
    /// Upper edge of the correlation grid
    #[arg(long)]
    eps_max: Option<f64>,
    /// Number of grid points (inclusive endpoints)
    #[arg(long)]
    eps_steps: Option<usize>,
    /// Single-photon bandwidth
    #[arg(long)]
    sigma: Option<f64>,
    /// Photon pairs per Monte-Carlo record
    #[arg(long)]
    mc_shots: Option<u64>,
    /// Independent records per grid point
    #[arg(long)]
    mc_repeats: Option<u64>,
    /// Base seed; repeat r draws from stream seed + r
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker pool size (default: available processors)
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with status 3 when the sweep hits a singular point
    #[arg(long)]
    strict: bool,
    /// Suppress progress output on stderr
    #[arg(long)]
    quiet: bool,
}

/// Optional values as they appear in a TOML config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    quantity: Option<String>,
    phi0: Option<f64>,
    phi0_k: Option<i64>,
    phi1: Option<Vec<f64>>,
    sigma: Option<f64>,
    out: Option<PathBuf>,
    epsilon: Option<EpsilonGrid>,
    mc: Option<McConfig>,
    threads: Option<usize>,
}

fn load_file_config(path: &PathBuf) -> Result<FileConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))
}

/// Merge flags over file values over defaults into a full SweepConfig.
fn resolve(args: &RunArgs, default_quantity: Option<Quantity>) -> Result<(SweepConfig, usize), Error> {
    let file = match &args.config {
        Some(path) => load_file_config(path)?,
        None => FileConfig::default(),
    };

    let quantity = match args.quantity.as_deref().or(file.quantity.as_deref()) {
        Some(name) => Quantity::from_str(name)?,
        None => default_quantity
            .ok_or_else(|| Error::Config("missing --quantity (or quantity in the config file)".into()))?,
    };

    let phi0 = match (args.phi0, args.phi0_k.or(file.phi0_k)) {
        (Some(v), _) => v,
        (None, Some(k)) => k as f64 * std::f64::consts::FRAC_PI_4,
        (None, None) => file.phi0.unwrap_or(std::f64::consts::FRAC_PI_4),
    };

    let file_grid = file.epsilon.unwrap_or_default();
    let epsilon_grid = EpsilonGrid {
        min: args.eps_min.unwrap_or(file_grid.min),
        max: args.eps_max.unwrap_or(file_grid.max),
        steps: args.eps_steps.unwrap_or(file_grid.steps),
    };

    let mc = match (args.mc_shots, args.mc_repeats, args.seed, file.mc) {
        (None, None, None, None) => None,
        (shots, repeats, seed, file_mc) => Some(McConfig {
            shots: shots
                .or(file_mc.map(|m| m.shots))
                .ok_or_else(|| Error::Config("missing --mc-shots".into()))?,
            repeats: repeats
                .or(file_mc.map(|m| m.repeats))
                .ok_or_else(|| Error::Config("missing --mc-repeats".into()))?,
            seed: seed.or(file_mc.map(|m| m.seed)).unwrap_or(0),
        }),
    };

    let config = SweepConfig {
        quantity,
        epsilon_grid,
        phi1_list: args
            .phi1
            .clone()
            .or(file.phi1)
            .unwrap_or_else(|| vec![0.1, 0.5, 1.0, 2.0]),
        phi0,
        sigma: args.sigma.or(file.sigma).unwrap_or(1.0),
        mc,
        output_path: args
            .out
            .clone()
            .or(file.out)
            .ok_or_else(|| Error::Config("missing --out (or out in the config file)".into()))?,
    };
    config.validate()?;
    let threads = args.threads.or(file.threads).unwrap_or(0);
    Ok((config, threads))
}

fn exit_code_for(err: &Error, strict: bool) -> u8 {
    match err {
        Error::SingularPoint { .. } | Error::SingularMatrix { .. } if strict => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    let (args, is_montecarlo) = match &cli.command {
        Command::Sweep(args) => (args, false),
        Command::Montecarlo(args) => (args, true),
    };
    let default_quantity = is_montecarlo.then_some(Quantity::MonteCarlo);
    let (config, threads) = resolve(args, default_quantity)
        .map_err(|e| (exit_code_for(&e, args.strict), e.to_string()))?;

    if is_montecarlo && config.quantity != Quantity::MonteCarlo {
        return Err((
            2,
            format!(
                "the montecarlo subcommand runs quantity = montecarlo, got {}",
                config.quantity
            ),
        ));
    }
    if !is_montecarlo && config.quantity == Quantity::MonteCarlo {
        return Err((2, "use the montecarlo subcommand for quantity = montecarlo".into()));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| (2u8, format!("cannot build worker pool: {e}")))?;

    let started = Instant::now();
    if !args.quiet {
        eprintln!(
            "{} {}: {} phi1 value(s) x {} grid point(s), sigma = {}, phi0 = {}",
            if is_montecarlo { "montecarlo" } else { "sweep" },
            config.quantity,
            config.phi1_list.len(),
            config.epsilon_grid.steps,
            config.sigma,
            config.phi0,
        );
    }

    let csv = pool
        .install(|| {
            if is_montecarlo {
                montecarlo_csv(&config)
            } else {
                sweep_csv(&config)
            }
        })
        .map_err(|e| (exit_code_for(&e, args.strict), e.to_string()))?;

    if args.strict && csv_has_singular_rows(&csv) {
        return Err((3, "singular grid point encountered in strict mode".into()));
    }

    std::fs::create_dir_all(
        config
            .output_path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or_else(|| std::path::Path::new(".")),
    )
    .and_then(|_| std::fs::write(&config.output_path, csv.as_bytes()))
    .map_err(|e| (2u8, format!("cannot write {}: {e}", config.output_path.display())))?;

    if !args.quiet {
        eprintln!(
            "wrote {} in {:.1} s",
            config.output_path.display(),
            started.elapsed().as_secs_f64()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
