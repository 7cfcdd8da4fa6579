//! Run configuration shared by the command line and JSON config files.

use std::path::PathBuf;

use anyhow::{ensure, Result};
use clap::ValueEnum;
use fracdiff::sampling::{JumpLaw, WaitingTimeLaw};
use fracdiff::{validate_params, FracParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Trajectories by parametric subordination.
    Subordinate,
    /// Continuous-time random walk paths.
    Ctrw,
    /// Samples of the subordinated position at physical time `horizon`.
    Sample,
    /// Transform-domain verification reports.
    Verify,
    /// Tabulated subordination-integral density at `horizon`.
    Density,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Subordinate => "subordinate",
            Mode::Ctrw => "ctrw",
            Mode::Sample => "sample",
            Mode::Verify => "verify",
            Mode::Density => "density",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

/// Waiting-time law of CTRW runs; parameters come from `beta` and `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WaitKind {
    /// Rate `1/scale`.
    Exponential,
    MittagLeffler,
    /// Scale `t0 = scale`.
    Pareto,
    ExtremalStable,
}

/// Jump law of CTRW runs; parameters come from `alpha`, `theta` and `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum JumpKind {
    TwoPoint,
    /// Variance `2 scale²`.
    Gaussian,
    Stable,
    /// Scale `x0 = scale`.
    Pareto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub mode: Mode,
    pub alpha: f64,
    pub theta: f64,
    pub beta: f64,
    /// Operational-time steps per trajectory.
    #[serde(rename = "N")]
    pub n_steps: usize,
    pub n_paths: usize,
    /// Operational horizon of subordinated trajectories.
    #[serde(rename = "T")]
    pub op_horizon: f64,
    /// Physical time horizon of CTRW paths, samples and densities.
    pub horizon: f64,
    pub seed: u64,
    /// Stream of path 0; path `i` uses stream `stream_id + i`.
    pub stream_id: u64,
    pub out_dir: PathBuf,
    pub format: Format,
    pub wait: WaitKind,
    pub jump: JumpKind,
    pub scale: f64,
    pub plot: bool,
    pub plot_stride: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Subordinate,
            alpha: 1.5,
            theta: 0.0,
            beta: 0.9,
            n_steps: 1_000_000,
            n_paths: 1,
            op_horizon: 1.0,
            horizon: 1.0,
            seed: 0,
            stream_id: 0,
            out_dir: PathBuf::from("out"),
            format: Format::Csv,
            wait: WaitKind::MittagLeffler,
            jump: JumpKind::Stable,
            scale: 1.0,
            plot: false,
            plot_stride: 1,
            x_min: -5.0,
            x_max: 5.0,
            x_points: 101,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<FracParams> {
        Ok(validate_params(self.alpha, self.theta, self.beta)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        ensure!(self.n_steps >= 1, "N must be at least 1");
        ensure!(self.n_paths >= 1, "n_paths must be at least 1");
        ensure!(self.op_horizon > 0.0 && self.op_horizon.is_finite(), "T must be positive");
        ensure!(self.horizon > 0.0 && self.horizon.is_finite(), "horizon must be positive");
        ensure!(self.scale > 0.0 && self.scale.is_finite(), "scale must be positive");
        ensure!(self.plot_stride >= 1, "plot_stride must be at least 1");
        ensure!(
            self.x_points >= 2 && self.x_min < self.x_max,
            "density grid needs x_min < x_max and 2+ points"
        );
        Ok(())
    }

    pub fn waiting_law(&self) -> WaitingTimeLaw {
        match self.wait {
            WaitKind::Exponential => WaitingTimeLaw::Exponential { m: 1.0 / self.scale },
            WaitKind::MittagLeffler => WaitingTimeLaw::MittagLeffler { beta: self.beta },
            WaitKind::Pareto => WaitingTimeLaw::Pareto {
                beta: self.beta,
                t0: self.scale,
            },
            WaitKind::ExtremalStable => WaitingTimeLaw::ExtremalStable { beta: self.beta },
        }
    }

    pub fn jump_law(&self) -> JumpLaw {
        match self.jump {
            JumpKind::TwoPoint => JumpLaw::TwoPoint,
            JumpKind::Gaussian => JumpLaw::Gaussian {
                sigma2: 2.0 * self.scale * self.scale,
            },
            JumpKind::Stable => JumpLaw::FellerStable {
                alpha: self.alpha,
                theta: self.theta,
            },
            JumpKind::Pareto => JumpLaw::SymmetricPareto {
                alpha: self.alpha,
                x0: self.scale,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
