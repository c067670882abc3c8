use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Every value flag is optional so that a `--config` file can supply it;
/// flags win over file values, file values win over built-in defaults.
#[derive(Debug, Parser)]
#[command(name = "slgi", version, about = "Spatial Leggett-Garg inequality scans on Heisenberg spin chains")]
pub struct Cli {
    /// TOML file with default values for any flag (keys use snake_case flag names)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of K_n for fixed axes and the optimized axis
    Sweep(SweepArgs),
    /// First-violation times and their linear fit against distance
    Lightcone(LightconeArgs),
    /// Maximal optimized K_n over a time window, with reference deviations
    Table(TableArgs),
    /// Shot-based estimate of one sequential correlator
    Sample(SampleArgs),
    /// Closed-form K curves (noninteracting chain or single spin)
    Oracle(OracleArgs),
}

#[derive(Debug, Args, Default)]
pub struct ModelArgs {
    /// Interaction range: nn or nnn
    #[arg(long)]
    pub range: Option<String>,
    /// Exchange coupling J
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Magnetic field h (> 0; times are h*t)
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Transverse coupling scale (XXZ anisotropy)
    #[arg(long, allow_negative_numbers = true)]
    pub xy: Option<f64>,
    /// Longitudinal coupling scale (XXZ anisotropy)
    #[arg(long, allow_negative_numbers = true)]
    pub zz: Option<f64>,
    /// Evolution engine: auto, dense-spectral or krylov
    #[arg(long)]
    pub engine: Option<String>,
    #[arg(long)]
    pub krylov_dim: Option<usize>,
    #[arg(long)]
    pub krylov_tol: Option<f64>,
    /// Longest single Krylov step in physical time
    #[arg(long)]
    pub max_substep: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct OutputArgs {
    /// Output file; defaults to $SLGI_OUTPUT_DIR/<name> or stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Distances: a range `2..7`, a list `2,4,6` or a single value
    #[arg(long)]
    pub n: Option<String>,
    /// Time grid start:stop:step in h*t
    #[arg(long)]
    pub grid: Option<String>,
    /// Violation threshold (> 1)
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Skip the optimal-axis search
    #[arg(long)]
    pub no_optimize: bool,
    /// Refine first-violation times by bisection
    #[arg(long)]
    pub refine_tau: bool,
    /// Window (h*t) for the reported maximum
    #[arg(long)]
    pub window: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct LightconeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Use the x axis instead of the optimized one
    #[arg(long)]
    pub no_optimize: bool,
    #[arg(long)]
    pub refine_tau: bool,
    /// Distances entering the fit, e.g. `2..6`
    #[arg(long)]
    pub fit_range: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct TableArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long)]
    pub n: Option<String>,
    /// Upper end of the h*t window
    #[arg(long)]
    pub window: Option<f64>,
    /// Grid step in h*t
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Chain length
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// First measurement as site:axis:ht (1-based site; axis x, y, z or vx,vy,vz)
    #[arg(long)]
    pub first: Option<String>,
    /// Second measurement as site:axis:ht
    #[arg(long)]
    pub second: Option<String>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct OracleArgs {
    #[command(flatten)]
    pub out: OutputArgs,
    /// noninteracting or single-spin
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
}
