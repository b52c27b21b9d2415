//! Simulation and Monte Carlo verification toolkit for GARCH(1,1) processes
//! whose persistence drifts toward the integrated boundary.

pub mod cli;
pub mod garch_sim;
pub mod gof;
pub mod innovations;
pub mod limits;
pub mod localization;
pub mod mc_harness;
pub mod statistics;
