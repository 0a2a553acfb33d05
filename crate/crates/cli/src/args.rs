// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wavesc",
    version,
    about = "Self-consistent wavelet regression for incomplete data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a curve from `index,y,observed` CSV data.
    Denoise1d(Denoise1d),
    /// Reconstruct a square PGM image with missing pixels.
    Denoise2d(Denoise2d),
    /// Generate a noisy incomplete data set from a test signal.
    Simulate(Simulate),
    /// Run a paired benchmark scenario.
    Bench(Bench),
    /// Compare complete-data and missing-data Poisson reconstructions.
    PoissonDemo(PoissonDemo),
    /// Export the per-coefficient irregularity map of a mask.
    Eta(Eta),
    /// Re-run the command recorded in a manifest.
    Replay(Replay),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Sim,
    Ref,
    Refa,
    Misc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Interp {
    None,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Hard,
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Random,
    Clustered,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output directory (created; must not exist unless --force).
    #[arg(long)]
    pub out: PathBuf,
    /// Replace an existing output directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Wavelet {
    /// `haar` or `db<v>` with v in 1..=10.
    #[arg(long, default_value = "db5")]
    pub wavelet: String,
    /// Coarsest level; 2^p scaling coefficients are never thresholded.
    #[arg(long, default_value_t = 3)]
    pub primary_level: u32,
}

#[derive(Debug, Clone, Args)]
pub struct Threshold {
    /// `universal`, `adjusted` or `fixed=<c>`.
    #[arg(long, default_value = "universal")]
    pub threshold: String,
    #[arg(long, value_enum, default_value_t = Operator::Hard)]
    pub operator: Operator,
}

#[derive(Debug, Clone, Args)]
pub struct Estimator {
    #[arg(long, value_enum, default_value_t = Algo::Refa)]
    pub algo: Algo,
    #[arg(long, value_enum, default_value_t = Interp::None)]
    pub interp: Interp,
    #[command(flatten)]
    pub threshold: Threshold,
    #[command(flatten)]
    pub wavelet: Wavelet,
    /// Relative change of σ̂ that ends the iteration.
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// MISC imputation count.
    #[arg(long = "M", default_value_t = 100)]
    pub m: usize,
    #[arg(long, env = "WAVESC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Denoise1d {
    /// CSV with header `index,y,observed`.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub estimator: Estimator,
    /// Also write eta.csv.
    #[arg(long)]
    pub eta: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Denoise2d {
    /// Square grayscale PGM (P2 or P5, maxval 255 or 65535).
    #[arg(long)]
    pub image: PathBuf,
    /// PGM of the same size; 0 marks a missing pixel.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[command(flatten)]
    pub estimator: Estimator,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Simulate {
    /// blocks, bumps, heavisine, doppler or synthetic-image.
    #[arg(long, default_value = "heavisine")]
    pub function: String,
    /// Grid length, or image side for synthetic-image.
    #[arg(long, default_value_t = 2048)]
    pub n: usize,
    #[arg(long, default_value_t = 7.0)]
    pub snr: f64,
    /// Missing fraction C_m in [0, 1).
    #[arg(long, default_value_t = 0.3)]
    pub missing: f64,
    #[arg(long, value_enum, default_value_t = Kind::Random)]
    pub kind: Kind,
    #[arg(long, env = "WAVESC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Bench {
    /// Scenario file with `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub snr: Option<f64>,
    #[arg(long)]
    pub missing: Option<f64>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Comma-separated, e.g. `sim,simi,ref,refa,misc,unicomp`.
    #[arg(long)]
    pub algorithms: Option<String>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long, value_enum)]
    pub operator: Option<Operator>,
    #[arg(long)]
    pub wavelet: Option<String>,
    #[arg(long)]
    pub primary_level: Option<u32>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Significance level of the pairwise rank tests.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, env = "WAVESC_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Record per-run wall time in metrics.csv (makes reruns differ).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PoissonDemo {
    /// Optional `index,count` CSV; a synthetic intensity is used otherwise.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub missing: f64,
    #[arg(long = "M", default_value_t = 100)]
    pub m: usize,
    #[command(flatten)]
    pub threshold: Threshold,
    #[command(flatten)]
    pub wavelet: Wavelet,
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, env = "WAVESC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Eta {
    /// `index,y,observed` CSV (only `observed` is read).
    #[arg(long, conflicts_with = "mask", required_unless_present = "mask")]
    pub input: Option<PathBuf>,
    /// Square mask PGM; 0 marks a missing pixel.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[command(flatten)]
    pub wavelet: Wavelet,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct Replay {
    pub manifest: PathBuf,
    #[command(flatten)]
    pub output: Output,
}
