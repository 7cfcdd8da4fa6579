use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use fracsim::config::{Format, JumpKind, Mode, RunConfig, WaitKind};
use fracsim::run::run;

/// Simulate and verify space-time fractional diffusion. Flags given
/// explicitly override values read from `--config`.
#[derive(Debug, Parser)]
#[command(name = "fracsim", version)]
struct Cli {
    /// JSON run configuration; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Space order, 0 < alpha <= 2.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Skewness, |theta| <= min(alpha, 2 - alpha).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Time order, 0 < beta <= 1.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Operational-time steps per trajectory.
    #[arg(long = "N")]
    n_steps: Option<usize>,
    /// Trajectories or samples per run.
    #[arg(long)]
    n_paths: Option<usize>,
    /// Operational horizon of subordinated trajectories.
    #[arg(long = "T", allow_hyphen_values = true)]
    op_horizon: Option<f64>,
    /// Physical horizon of CTRW paths, samples and densities.
    #[arg(long, allow_hyphen_values = true)]
    horizon: Option<f64>,
    /// Seed of the random streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Stream of path 0; path i uses stream_id + i.
    #[arg(long)]
    stream_id: Option<u64>,
    #[arg(long, env = "FRACSIM_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    wait: Option<WaitKind>,
    #[arg(long, value_enum)]
    jump: Option<JumpKind>,
    /// Scale of the CTRW waiting or jump law.
    #[arg(long, allow_hyphen_values = true)]
    scale: Option<f64>,
    /// Also write gnuplot scripts for the trajectories.
    #[arg(long)]
    plot: bool,
    /// Plot every k-th row of each trajectory.
    #[arg(long)]
    plot_stride: Option<usize>,
    /// Lower end of the density grid.
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    /// Upper end of the density grid.
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    /// Points on the density grid.
    #[arg(long)]
    x_points: Option<usize>,
}

macro_rules! overlay {
    ($cfg:ident, $cli:ident, $($field:ident),*) => {
        $(if let Some(v) = $cli.$field { $cfg.$field = v; })*
    };
}

impl Cli {
    fn resolve(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        let cli = self;
        overlay!(
            cfg,
            cli,
            mode,
            alpha,
            theta,
            beta,
            n_steps,
            n_paths,
            op_horizon,
            horizon,
            seed,
            stream_id,
            out_dir,
            format,
            wait,
            jump,
            scale,
            plot_stride,
            x_min,
            x_max,
            x_points
        );
        cfg.plot |= cli.plot;
        Ok(cfg)
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<fracdiff::Error>() {
            return err.kind();
        }
        if cause.is::<serde_json::Error>() {
            return "FormatError";
        }
        if cause.is::<std::io::Error>() {
            return "IoError";
        }
    }
    "ConfigError"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dump = cli.dump_config;
    let result = cli.resolve().and_then(|cfg| {
        if dump {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{}", cfg.to_json())?;
            return Ok(true);
        }
        cfg.validate()?;
        Ok(run(&cfg)?.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let record = serde_json::json!({ "error": error_kind(&e), "message": format!("{e:#}") });
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}
