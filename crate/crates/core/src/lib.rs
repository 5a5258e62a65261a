//! Simulation and analysis of N-player threshold games on structured
//! populations.
//!
//! * [`netgen`] builds population structures and their metrics.
//! * [`engine`] runs the round-based game and strategy update.
//! * [`meanfield`] holds the closed-form fixed-point analysis.
//! * [`sweep`] orchestrates alpha sweeps, transition detection and the
//!   effective-population-size search.

pub mod cli;
pub mod engine;
pub mod error;
pub mod meanfield;
pub mod netgen;
pub mod output;
pub mod rng;
pub mod sweep;

pub use error::{Error, Result};
