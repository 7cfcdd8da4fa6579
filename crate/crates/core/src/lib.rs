//! Simulation and verification toolkit for space-time fractional diffusion.
//!
//! Trajectories are produced by parametric subordination: a parent stable
//! motion in operational time is observed through a one-sided stable
//! leading process that maps operational time to physical time. Around
//! that sit a continuous-time random walk engine with its series and
//! compound-Poisson oracles, transform-domain checks of the power-law
//! asymptotics and Mittag-Leffler universality, and the statistics used to
//! compare Monte-Carlo output with theory.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ctrw;
pub mod error;
pub mod mittag_leffler;
pub mod params;
pub mod quad;
pub mod sampling;
pub mod scaling_limits;
pub mod special;
pub mod stable_density;
pub mod stats;
pub mod subordination;

pub use error::{Error, Result};
pub use params::{validate_params, FracParams, Variance};
pub use sampling::{JumpLaw, RngStream, WaitingTimeLaw};
