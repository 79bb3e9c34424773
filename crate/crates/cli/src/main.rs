//! `lindquant`: quantize classical polynomial flows and simulate the resulting generators.
//!
//! Exit codes: 0 success, 1 verification failure, 2 numerical failure, 3 input error.

// `!(x < tol)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lindquant::GridSpec;

use crate::io::{parse_grid, parse_param};

#[derive(Parser, Debug)]
#[command(name = "lindquant", version, about = "Cascade quantization of classical flows into Lindblad generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantize a classical system into a Lindbladian (JSON).
    Quantize(QuantizeArgs),
    /// Check that a Lindbladian's Ehrenfest drift reproduces a classical system.
    Verify(VerifyArgs),
    /// Steady state in a truncated Fock space: density dump plus observables.
    Steady(SteadyArgs),
    /// Wigner function of a steady state (or of a saved state) as CSV.
    Wigner(WignerArgs),
    /// Deterministic time evolution; CSV of trace, moments and smallest eigenvalue.
    Evolve(EvolveArgs),
    /// One noisy realization (Wigner-mode trajectory and spikes), or an ensemble of ⟨x̂⟩.
    Stochastic(StochasticArgs),
    /// Interspike regularity across noise strengths.
    Scan(ScanArgs),
    /// Named systems with their parameters.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Table,
    Cascade,
}

#[derive(Args, Debug)]
pub struct SystemSource {
    /// System JSON file.
    #[arg(long, conflicts_with = "catalog")]
    pub system: Option<PathBuf>,
    /// Catalog system name (see `catalog list`).
    #[arg(long)]
    pub catalog: Option<String>,
    /// Catalog parameter, `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

#[derive(Args, Debug)]
pub struct GeneratorSource {
    /// Lindbladian JSON file.
    #[arg(long, conflicts_with = "catalog")]
    pub lindblad: Option<PathBuf>,
    /// Use a catalog system's printed generator.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Catalog parameter, `name=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

#[derive(Args, Debug)]
pub struct Truncation {
    /// Fock-space dimension.
    #[arg(long, conflicts_with = "auto_truncate")]
    pub fock: Option<usize>,
    /// Double the dimension until the steady-state ⟨â†â⟩ settles.
    #[arg(long)]
    pub auto_truncate: bool,
    /// Largest dimension tried by --auto-truncate.
    #[arg(long, default_value_t = 40)]
    pub max_fock: usize,
}

#[derive(Args, Debug)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Quantization route; defaults to the table for degree ≤ 3 and the cascade otherwise.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Output path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Lindbladian JSON file.
    #[arg(long)]
    pub lindblad: PathBuf,
    #[command(flatten)]
    pub source: SystemSource,
    /// Largest accepted residual coefficient.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub generator: GeneratorSource,
    #[command(flatten)]
    pub truncation: Truncation,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WignerArgs {
    #[command(flatten)]
    pub generator: GeneratorSource,
    /// Density-matrix JSON (bare, or a `steady` output) instead of a generator.
    #[arg(long, conflicts_with_all = ["lindblad", "catalog"])]
    pub state: Option<PathBuf>,
    #[command(flatten)]
    pub truncation: Truncation,
    /// `xmin:xmax:nx[,ymin:ymax:ny]`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-6:6:121")]
    pub grid: GridSpec,
    /// Divide by max |W| so values lie in [−1, 1].
    #[arg(long)]
    pub scale_unit: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub generator: GeneratorSource,
    #[command(flatten)]
    pub truncation: Truncation,
    /// `vacuum`, `fock:K`, `coherent:RE[,IM]` or a density-matrix JSON file.
    #[arg(long, default_value = "vacuum")]
    pub initial: String,
    #[arg(long, default_value_t = 10.0)]
    pub t_final: f64,
    /// Number of output rows (including t = 0).
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    X,
    Y,
}

#[derive(Args, Debug)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub generator: GeneratorSource,
    /// Fock-space dimension.
    #[arg(long, default_value_t = 16)]
    pub fock: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Steps between recorded samples.
    #[arg(long, default_value_t = 50)]
    pub save_every: usize,
    /// Displacement of the initial state from the steady state (phase-space units).
    #[arg(long, default_value_t = 0.2)]
    pub bias: f64,
    /// `xmin:xmax:nx[,ymin:ymax:ny]` used to locate the Wigner mode.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-4:4:81")]
    pub grid: GridSpec,
    /// Mode coordinate used as the spike signal.
    #[arg(long, value_enum, default_value_t = Axis::Y)]
    pub axis: Axis,
}

#[derive(Args, Debug)]
pub struct StochasticArgs {
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Noise strength κ.
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, default_value_t = 60.0)]
    pub t_final: f64,
    /// More than one switches to the ensemble mean of ⟨x̂⟩ with its standard error.
    #[arg(long, default_value_t = 1)]
    pub trajectories: usize,
    /// Spike-time CSV for single runs.
    #[arg(long)]
    pub spikes: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Noise strengths, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub kappa: Vec<f64>,
    #[arg(long, default_value_t = 200.0)]
    pub t_final: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Names and default parameters.
    List {
        #[arg(long)]
        json: bool,
    },
    /// System JSON (or its printed Lindbladian) for one entry.
    Show {
        name: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Emit the printed Lindbladian instead of the system.
        #[arg(long)]
        lindblad: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Quantize(a) => commands::quantize(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Steady(a) => commands::steady(&a),
        Command::Wigner(a) => commands::wigner(&a),
        Command::Evolve(a) => commands::evolve(&a),
        Command::Stochastic(a) => commands::stochastic(&a),
        Command::Scan(a) => commands::scan(&a),
        Command::Catalog(c) => commands::catalog(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
