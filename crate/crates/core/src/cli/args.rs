use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub(crate) const SUBCOMMANDS: [&str; 8] = [
    "solve",
    "single-point",
    "sweep-alpha",
    "sweep-bandlimit",
    "critical",
    "rbf-decay",
    "lfp",
    "reproduce",
];

#[derive(Debug, Parser)]
#[command(
    name = "specbound",
    version,
    about = "Sobolev-regularized interpolation on band-limited frequency grids",
    allow_negative_numbers = true
)]
pub struct Cli {
    /// Directory for CSV, SVG and manifest output.
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Worker threads (falls back to SPECBOUND_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed recorded in the manifest; every computation is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also emit SVG plots.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Leave the generation-time comment out of SVG files.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// File of `key = value` lines merged in before the command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Solve the regularized problem for a samples file and diagnose it.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Closed-form solution for a single sample at the origin with label 2.
    #[command(allow_negative_numbers = true)]
    SinglePoint(SinglePointArgs),
    /// Solve and classify at several exponents.
    #[command(allow_negative_numbers = true)]
    SweepAlpha(SweepAlphaArgs),
    /// Compare solutions across band limits at a fixed mesh.
    #[command(allow_negative_numbers = true)]
    SweepBandlimit(SweepBandlimitArgs),
    /// Gaussian Sobolev norm as sigma shrinks, with a limit verdict.
    #[command(allow_negative_numbers = true)]
    Critical(CriticalArgs),
    /// Norm of Gaussian RBF interpolants as sigma shrinks.
    #[command(allow_negative_numbers = true)]
    RbfDecay(RbfDecayArgs),
    /// Linear frequency-principle flow with the ReLU kernel.
    #[command(allow_negative_numbers = true)]
    Lfp(LfpArgs),
    /// Regenerate a preset experiment.
    #[command(allow_negative_numbers = true)]
    Reproduce(ReproduceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::SinglePoint(_) => "single-point",
            Command::SweepAlpha(_) => "sweep-alpha",
            Command::SweepBandlimit(_) => "sweep-bandlimit",
            Command::Critical(_) => "critical",
            Command::RbfDecay(_) => "rbf-decay",
            Command::Lfp(_) => "lfp",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct DataArgs {
    /// Samples CSV with header x1,...,xd,y.
    #[arg(long)]
    pub data: PathBuf,
    /// Expected dimension; must match the file header.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    /// Band limit M; the grid has (2M+1)^d frequencies.
    #[arg(long)]
    pub band_limit: usize,
    /// Frequency spacing.
    #[arg(long, default_value_t = 0.1)]
    pub mesh: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathChoice {
    Dual,
    Dense,
    Svd,
    Auto,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = PathChoice::Dual)]
    pub path: PathChoice,
    /// Probe count for the triviality index (default 512 in 1-D, 64^d otherwise).
    #[arg(long)]
    pub probes: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SinglePointArgs {
    #[arg(long)]
    pub band_limit: usize,
    #[arg(long, default_value_t = 0.01)]
    pub mesh: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// The field is tabulated on [-half_width, half_width].
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepAlphaArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub probes: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepBandlimitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.1)]
    pub mesh: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Ascending band limits to compare.
    #[arg(long, value_delimiter = ',', required = true)]
    pub band_limits: Vec<usize>,
    /// Evaluation points per axis over the default window.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantChoice {
    Bracket,
    Homogeneous,
}

#[derive(Debug, Args, Serialize)]
pub struct CriticalArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub alpha: f64,
    /// Strictly descending sigma values spanning at least two decades.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001,0.0001")]
    pub sigmas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = VariantChoice::Bracket)]
    pub variant: VariantChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct RbfDecayArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025,0.0125")]
    pub sigmas: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub mesh: f64,
    /// Defaults to the smallest band reaching 6/(2 pi sigma_min).
    #[arg(long)]
    pub band_limit: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroModeChoice {
    Cap,
    Exclude,
}

#[derive(Debug, Args, Serialize)]
pub struct LfpArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// E[r(0)^3].
    #[arg(long, default_value_t = 1.0)]
    pub m3: f64,
    /// E[a(0)^2 r(0)].
    #[arg(long, default_value_t = 1.0)]
    pub ma2r: f64,
    #[arg(long, value_enum, default_value_t = ZeroModeChoice::Cap)]
    pub zero_mode: ZeroModeChoice,
    /// Euler step (default 0.9 times the stability bound).
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    /// Stop early and compare with the weighted minimum-norm solve once the
    /// residual drops below tol/10.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of trajectory rows.
    #[arg(long, default_value_t = 100)]
    pub checkpoints: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Fig1,
    Fig2,
    Fig3,
    Critical,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Run the single-point figure at M = 10^6 instead of 10^4.
    #[arg(long)]
    pub full_scale: bool,
}
