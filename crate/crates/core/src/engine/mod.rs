//! The round-based threshold game.
//!
//! Each round every individual picks an action from its strategy, all
//! matches are played, each individual averages the per-match payoffs of the
//! cooperators and defectors it met, and all strategies are updated at once.

mod config;
mod round;
mod sim;

pub use config::{effective_threshold, GameConfig, MatchSize, Threshold};
pub use round::{
    accumulate_and_average, assemble_matches, play_match, sample_actions, update_strategies, Encounters, Matches,
    Population, RoundLedger,
};
pub use sim::{run_simulation, run_structure, tail_average, SimResult, Simulation, Structure};
