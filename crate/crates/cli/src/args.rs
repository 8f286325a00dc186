use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::manifest::MRange;

#[derive(Debug, Parser)]
#[command(name = "abphase", version, about = "Phase shifts, spectra and cross sections for a thin flux line")]
pub struct Cli {
    #[command(subcommand)]
    pub action: Action,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Action {
    #[command(flatten)]
    Run(Command),
    /// Re-run the manifest embedded in a previous output.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Output file produced by an earlier run.
    pub file: PathBuf,
    /// Compare against the file instead of printing; exit 1 on mismatch.
    #[arg(long)]
    pub check: bool,
}

/// Flags that shape the output but not the numbers.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Emit one JSON document instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seconds since the epoch to record in the manifest.
    #[arg(long, global = true)]
    pub timestamp: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Per-channel phase shifts from one or more routes.
    PhaseShifts(PhaseShiftsArgs),
    /// Confined spectrum, analytic and optionally from the radial solver.
    Spectrum(SpectrumArgs),
    /// Closure of the truncated generator matrices, as JSON.
    AlgebraCheck(AlgebraArgs),
    /// Both sides of the eigenvalue-derivative identity, as JSON.
    Hellmann(HellmannArgs),
    /// Log-determinant phases over an omega schedule and their extrapolation.
    Fredholm(FredholmArgs),
    /// Scattering amplitude and differential cross section.
    CrossSection(CrossSectionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Analytic,
    Fredholm,
    Ode,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FredholmOptions {
    /// Energy at which the determinant is evaluated.
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
    /// Strictly decreasing omega schedule.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 5e-3, 2.5e-3, 1.25e-3])]
    pub omegas: Vec<f64>,
    /// Fixed epsilon / omega.
    #[arg(long, default_value_t = 10.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PhaseShiftsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Angular momenta, `a..b` inclusive or a single value.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub m: MRange,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![MethodArg::Analytic])]
    pub method: Vec<MethodArg>,
    #[command(flatten)]
    pub fredholm: FredholmOptions,
    /// Wave number for the ode route.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Outer radius for the ode route; k * r_max must reach 200.
    #[arg(long, default_value_t = 200.0)]
    pub r_max: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GridOptions {
    #[arg(long, default_value_t = ab_phase::radial::DEFAULT_RHO_MAX)]
    pub rho_max: f64,
    #[arg(long, default_value_t = ab_phase::radial::DEFAULT_NUM_POINTS)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Oscillator frequency; energies are in units of omega when omitted.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Highest level index.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    /// Add the Richardson-extrapolated radial eigenvalues.
    #[arg(long)]
    pub numeric: bool,
    /// Largest accepted |numeric - analytic|, in units of omega.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    #[command(flatten)]
    pub grid: GridOptions,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AlgebraArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Truncation dimension.
    #[arg(long = "dimension", short = 'N', default_value_t = 64)]
    pub dimension: usize,
    /// Use this lowest weight instead of the selected branch.
    #[arg(long, allow_hyphen_values = true)]
    pub e0_override: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HellmannArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub level: usize,
    /// Central-difference step in nu^2; defaults to min(1e-3, nu^2/2).
    #[arg(long)]
    pub dnu2: Option<f64>,
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    #[command(flatten)]
    pub grid: GridOptions,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FredholmArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub m: MRange,
    #[command(flatten)]
    pub fredholm: FredholmOptions,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CrossSectionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Angles per side on [cone, pi].
    #[arg(long, default_value_t = 36)]
    pub angles: usize,
    /// Half-opening of the excluded forward cone, in degrees.
    #[arg(long, default_value_t = 5.0)]
    pub cone_deg: f64,
    #[arg(long, default_value_t = 200)]
    pub m_cut: usize,
    #[arg(long, default_value_t = 0.1)]
    pub abel_eta: f64,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
}
