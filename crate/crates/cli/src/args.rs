use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use modburgers::Window;

#[derive(Debug, Parser)]
#[command(
    name = "modburgers",
    version,
    about = "Simulate and analyse odd three-interface shocks of u_t = |u|_x + u_xx"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its trace (CSV) and manifest (JSON).
    Simulate(SimulateArgs),
    /// Fit extinction time and scaling exponents to a trace.
    Analyze(AnalyzeArgs),
    /// Simulate and analyse several alpha values in parallel.
    Sweep(SweepArgs),
}

/// Run parameters; anything not given falls back to the manifest passed
/// with `--config`, then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct RunFlags {
    /// Manifest or sidecar JSON of an earlier run.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Outer domain length L in the rescaled variable.
    #[arg(long, value_name = "L")]
    pub length: Option<f64>,
    /// Grid step h.
    #[arg(long, value_name = "H")]
    pub step: Option<f64>,
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Stop once the interface reaches this position.
    #[arg(long)]
    pub xi_stop: Option<f64>,
    /// Write a trace record every this many steps.
    #[arg(long)]
    pub output_every: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FitFlags {
    /// Smallest extinction-time candidate [default: last sample + 1e-4].
    #[arg(long)]
    pub t0_min: Option<f64>,
    /// Largest extinction-time candidate [default: last sample + 0.2].
    #[arg(long)]
    pub t0_max: Option<f64>,
    /// Candidate spacing [default: 1e-4].
    #[arg(long)]
    pub t0_step: Option<f64>,
    /// Samples entering the fit: `all`, `below-max:F` or `trailing:F`
    /// [default: below-max:0.8].
    #[arg(long, value_parser = parse_window)]
    pub window: Option<Window>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub run: RunFlags,
    /// Trace CSV; the manifest is written next to it with a `.json` extension.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_name = "PATH")]
    pub trace: PathBuf,
    #[command(flatten)]
    pub fit: FitFlags,
    /// Report JSON.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub alpha_list: Vec<f64>,
    #[command(flatten)]
    pub run: RunFlags,
    #[command(flatten)]
    pub fit: FitFlags,
    /// Directory for traces, manifests, reports and `summary.csv`.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

pub fn parse_window(text: &str) -> Result<Window, String> {
    let fraction = |f: &str| {
        f.parse::<f64>()
            .map_err(|_| format!("`{f}` is not a number"))
    };
    let window = match text.split_once(':') {
        None if text == "all" => Window::All,
        Some(("below-max", f)) => Window::BelowFractionOfMax(fraction(f)?),
        Some(("trailing", f)) => Window::TrailingFraction(fraction(f)?),
        _ => {
            return Err(format!(
                "unknown window `{text}`; use all, below-max:F or trailing:F"
            ))
        }
    };
    window.validate().map_err(|e| e.to_string())?;
    Ok(window)
}
