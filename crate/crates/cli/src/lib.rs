//! Library half of the `fracsim` binary: configuration, execution and plot
//! scripts.

pub mod config;
pub mod plot;
pub mod run;
