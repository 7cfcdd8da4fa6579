//! Seeded random variates and the waiting-time and jump law descriptors.

mod laws;
mod rng;
mod variates;

pub(crate) use variates::feller_unchecked;

pub use laws::{JumpLaw, JumpTail, WaitingTail, WaitingTimeLaw};
pub use rng::RngStream;
pub use variates::{
    pareto_quantile, sample_extremal_stable, sample_feller_stable, sample_ml_waiting, sample_pareto_waiting, sample_powerlaw_jump,
    sample_symmetric_stable,
};
