//! `automorph`: reproducible experiments on regular polynomial automorphisms.
//!
//! Every subcommand reads a TOML map config, writes CSV tables (and graymaps
//! where there is a picture to draw) into `--out`, and finishes with a
//! `manifest.json` listing each file with its SHA-256.

mod commands;
mod out;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "automorph", version, about = "Experiments on regular polynomial automorphisms of C^n")]
pub struct Cli {
    /// Map config (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core. Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Degrees, regularity index, Jacobian and indeterminacy loci.
    Info,
    /// Monte Carlo check of the filtration properties.
    FiltrationVerify(FiltrationArgs),
    /// Orbit verdict for every cell of a real grid.
    ClassifyGrid(GridArgs),
    /// Attracting cycles and their basins on a real grid.
    Basins(GridArgs),
    /// Periodic-orbit census.
    Periodic(PeriodicArgs),
    /// G+ and G- on a real grid.
    Green(GreenArgs),
    /// Box-counting dimension of J, J+-, K or K+-.
    Boxdim(BoxdimArgs),
    /// Growth rates s+ and s-.
    Growth(GrowthArgs),
    /// Pressure curves, Bowen-Ruelle roots and entropy.
    Pressure(PressureArgs),
    /// Full dimension report: measurements next to every analytic bound.
    Dims(DimsArgs),
    /// t^u, t^s and box dimension along a parameter path.
    Sweep(SweepArgs),
}

/// `lo:hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
        let lo: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let hi: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        if !(lo < hi) {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Span { lo, hi })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

/// Inclusive integer range `a:b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Levels {
    pub lo: u32,
    pub hi: u32,
}

impl Levels {
    pub fn all(self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }

    pub fn pair(self) -> (u32, u32) {
        (self.lo, self.hi)
    }
}

impl FromStr for Levels {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
        let lo: u32 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let hi: u32 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Levels { lo, hi })
    }
}

/// `lo:hi:n`, `n` evenly spaced values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for TGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        };
        let lo: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let hi: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        let n: usize = c.trim().parse().map_err(|e| format!("{c:?}: {e}"))?;
        if n < 2 || !(lo < hi) {
            return Err(format!("bad grid {s:?}"));
        }
        Ok(TGrid { lo, hi, n })
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RadiusArgs {
    /// Filtration radius; chosen by verification when omitted.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Samples per trial radius when choosing it.
    #[arg(long, default_value_t = 2000)]
    pub radius_samples: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NewtonArgs {
    /// Side of the real Newton seed grid over V.
    #[arg(long, default_value_t = 200)]
    pub seed_grid: usize,
    /// Complex Newton seeds drawn in the polydisk.
    #[arg(long, default_value_t = 20_000)]
    pub random_seeds: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FiltrationArgs {
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Orbit length checked per sample.
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct GridArgs {
    /// Cells per side.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Range of both axes, or of the horizontal one with --window-y.
    #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
    pub window: Span,
    #[arg(long, allow_hyphen_values = true)]
    pub window_y: Option<Span>,
    /// Orbit steps per cell.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    /// Largest period searched for attracting cycles.
    #[arg(long, default_value_t = 4)]
    pub kmax: usize,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub newton: NewtonArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct PeriodicArgs {
    /// Census of f^k for this k only.
    #[arg(long)]
    pub period: Option<usize>,
    /// Censuses for k = 1..=kmax when --period is absent.
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// Side of the real Newton seed grid over V.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, default_value_t = 20_000)]
    pub random_seeds: usize,
    #[command(flatten)]
    pub radius: RadiusArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct GreenArgs {
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
    pub window: Span,
    #[arg(long, allow_hyphen_values = true)]
    pub window_y: Option<Span>,
    /// Iterations before a point counts as bounded.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
    #[arg(long, default_value_t = 1e10)]
    pub big_radius: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    J,
    JPlus,
    JMinus,
    K,
    KPlus,
    KMinus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxStrategy {
    /// Recursive box refinement with escape and trap exclusion.
    Indicator,
    /// Saddle cycle points.
    Saddles,
    /// Escape-boundary samples on random complex lines.
    Boundary,
}

#[derive(Args, Debug, Serialize)]
pub struct BoxdimArgs {
    #[arg(long, value_enum, default_value = "j")]
    pub target: Target,
    #[arg(long, value_enum, default_value = "indicator")]
    pub strategy: BoxStrategy,
    /// Dyadic levels counted.
    #[arg(long, default_value = "0:7")]
    pub scales: Levels,
    #[arg(long, default_value = "2:7")]
    pub fit_window: Levels,
    /// Largest period for saddle samples and attracting cycles.
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// Complex lines for the boundary strategy.
    #[arg(long, default_value_t = 2000)]
    pub lines: usize,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub newton: NewtonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStrategy {
    Saddles,
    Boundary,
}

#[derive(Args, Debug, Serialize)]
pub struct GrowthArgs {
    /// Longest product `Df^k`.
    #[arg(long, default_value_t = 20)]
    pub kmax: usize,
    #[arg(long, value_enum, default_value = "saddles")]
    pub strategy: SampleStrategy,
    /// Census depth for saddle samples.
    #[arg(long, default_value_t = 6)]
    pub period: usize,
    #[arg(long, default_value_t = 500)]
    pub lines: usize,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub newton: NewtonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightArg {
    Unstable,
    Stable,
}

#[derive(Args, Debug, Serialize)]
pub struct PressureArgs {
    #[arg(long, default_value = "0:2:41")]
    pub t_grid: TGrid,
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    #[arg(long, value_enum, default_value = "unstable")]
    pub weight: WeightArg,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub newton: NewtonArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct DimsArgs {
    /// Census depth.
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// Longest product for s+ and s-.
    #[arg(long, default_value_t = 20)]
    pub growth_k: usize,
    #[arg(long, default_value = "0:7")]
    pub scales: Levels,
    #[arg(long, default_value = "2:7")]
    pub fit_window: Levels,
    /// Skip box counting; only bounds are reported.
    #[arg(long)]
    pub no_boxdim: bool,
    #[command(flatten)]
    pub radius: RadiusArgs,
    #[command(flatten)]
    pub newton: NewtonArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Param {
    /// Jacobian coefficient `a`.
    A,
    /// Constant term of the stage polynomial (`q` for Fornæss–Wu maps).
    C,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "c")]
    pub param: Param,
    /// Hénon stage whose parameter moves.
    #[arg(long, default_value_t = 0)]
    pub stage: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    /// Box-count levels for J; omitted to skip box counting.
    #[arg(long)]
    pub scales: Option<Levels>,
    #[arg(long, default_value = "3:9")]
    pub fit_window: Levels,
    #[arg(long, default_value_t = 2000)]
    pub radius_samples: usize,
    #[command(flatten)]
    pub newton: NewtonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: worker pool: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| commands::run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
