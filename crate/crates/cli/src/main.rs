//! `spincm`: verification suites, simulations and one-shot evaluations for
//! spin Calogero-Moser systems.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a check failed,
//! 3 the requested point or trajectory hit the singular set.

mod check;
mod config;
mod eval;
mod simulate;
mod system;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{set, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CHECK_FAILED: u8 = 2;
pub const EXIT_SINGULAR: u8 = 3;

/// Environment variable consulted for the seed when neither the flag nor
/// the config file sets one.
pub const SEED_ENV: &str = "SPINCM_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "spincm",
    version,
    about = "Spin Calogero-Moser systems from dynamical r-matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and write a JSON report.
    Check(CheckArgs),
    /// Integrate the Hamiltonian flow and write a trajectory.
    Simulate(SimulateArgs),
    /// Evaluate H, L(z), r(q, z) or spectral invariants at one point.
    Eval(EvalArgs),
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algebra such as A1, A2, B2 (comma-separated list for `check`).
    #[arg(long)]
    algebra: Option<String>,
    /// rational, trigonometric or elliptic (comma-separated list for `check`).
    #[arg(long)]
    family: Option<String>,
    /// Δ′ for the rational family: all, none, or root labels like "a1,-a1".
    #[arg(long)]
    delta_prime: Option<String>,
    /// Π′ for the trigonometric family: all, none, or simple-root labels.
    #[arg(long)]
    pi_prime: Option<String>,
    /// First lattice half-period of the elliptic family.
    #[arg(long, allow_hyphen_values = true)]
    omega1: Option<String>,
    /// Second lattice half-period of the elliptic family.
    #[arg(long, allow_hyphen_values = true)]
    omega2: Option<String>,
    /// Seed for sampling (overrides the config file and SPINCM_SEED).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Suite to run (repeatable or comma-separated): rmatrix, fpb, energy,
    /// gradients, conservation or all.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    /// Samples per configuration.
    #[arg(long)]
    samples: Option<usize>,
    /// Add a non-closed Δ′ case that must fail the CDYBE.
    #[arg(long)]
    negative_control: bool,
    /// Tolerance override `name=value` (repeatable).
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
    /// Report path.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    /// Initial positions, comma-separated complex values.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Initial momenta.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Initial spins in basis order (Cartan first, then roots).
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Draw a random admissible initial point from the seed.
    #[arg(long)]
    random: bool,
    /// Project the initial point onto Σ.
    #[arg(long)]
    sigma: bool,
    /// rk4 or rk8.
    #[arg(long)]
    method: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    #[arg(long)]
    record_every: Option<usize>,
    /// Spectral parameters at which tr L(z)^k is recorded.
    #[arg(long, allow_hyphen_values = true)]
    spectral_z: Option<String>,
    #[arg(long)]
    spectral_kmax: Option<usize>,
    /// Trajectory path (.csv or .json).
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json; inferred from the output extension when omitted.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Spectral parameter.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Quantities to print (comma-separated): h, lax, r, spectral, all.
    #[arg(long, value_delimiter = ',')]
    what: Vec<String>,
    /// Highest power k of tr L(z)^k.
    #[arg(long)]
    kmax: Option<usize>,
}

/// Loads the config file and applies the shared flags.
fn base_config(common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    set(&mut cfg.algebra, common.algebra.clone());
    set(&mut cfg.family, common.family.clone());
    set(&mut cfg.delta_prime, common.delta_prime.clone());
    set(&mut cfg.pi_prime, common.pi_prime.clone());
    set(&mut cfg.omega1, common.omega1.as_deref().map(str::parse).transpose()?);
    set(&mut cfg.omega2, common.omega2.as_deref().map(str::parse).transpose()?);
    set(&mut cfg.seed, common.seed);
    if cfg.seed.is_none() {
        if let Ok(text) = std::env::var(SEED_ENV) {
            let seed = text
                .trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("{SEED_ENV}='{text}' is not an unsigned integer"))?;
            cfg.seed = Some(seed);
        }
    }
    cfg.seed.get_or_insert(spincm::verify::DEFAULT_SEED);
    Ok(cfg)
}

/// A singular configuration or approach anywhere in the error chain.
fn is_singular(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.downcast_ref::<spincm::Error>().is_some_and(|e| {
            matches!(
                e.root_cause(),
                spincm::Error::SingularConfiguration { .. } | spincm::Error::SingularApproach { .. }
            )
        })
    })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Check(args) => check::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Eval(args) => eval::run(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_singular(&e) { EXIT_SINGULAR } else { EXIT_USAGE })
        }
    }
}
