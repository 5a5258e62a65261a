//! Experiment grids: alpha sweeps, transition detection, the effective
//! population size search, N-dependence and noise studies.
//!
//! Runs inside a sweep are independent and execute on the current rayon
//! pool. Results are collected in grid order, so output never depends on
//! scheduling.

mod crit;
mod leff;
mod ndep;
mod noise;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run_structure, GameConfig, MatchSize, Structure, Threshold};
use crate::error::{Error, Result};
use crate::netgen::{AdjacencyGraph, NetworkKind, NetworkSpec};
use crate::rng::derive_seed;

pub use crit::{
    default_alpha_grid, detect_alpha_crit, find_alpha_crit, nominal_game, CritPlan, CritResult, CRIT_LEVEL,
};
pub use leff::{
    correlate_leff_lstar, find_l_eff, leff_for_network, pearson, FullyMixedReference, LeffFragment, LeffResult,
};
pub use ndep::{n_dependence, NdepProtocol, NdepRow};
pub use noise::{noise_study, NoiseRow};

/// Summary of one (network, α, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub spec: NetworkSpec,
    pub config: GameConfig,
    pub alpha: f64,
    pub seed: u64,
    /// `⟨x⟩·N/M`, or `⟨x⟩/M_rel` for relative thresholds.
    pub scaled_coop: f64,
    pub time_averaged_mean_x: f64,
}

/// Seed-averaged cooperation at one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub alpha: f64,
    pub mean_x: f64,
    pub scaled_coop: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub curve: Vec<CurvePoint>,
    pub records: Vec<SweepRecord>,
}

/// A population structure ready to be simulated: the spec plus its
/// generated graph (absent when fully mixed).
#[derive(Debug, Clone)]
pub struct Network {
    pub spec: NetworkSpec,
    pub graph: Option<AdjacencyGraph>,
}

impl Network {
    pub fn build(spec: NetworkSpec) -> Result<Self> {
        let graph = spec.build()?;
        Ok(Self { spec, graph })
    }

    pub fn structure(&self) -> Structure<'_> {
        match &self.graph {
            Some(g) => Structure::Graph(g),
            None => Structure::FullyMixed { size: self.spec.size },
        }
    }

    /// The match-size rule a game on this network should use: the graph
    /// decides, or `n` players when fully mixed.
    pub fn match_size(&self, n: usize) -> MatchSize {
        if self.spec.kind == NetworkKind::FullyMixed {
            MatchSize::Fixed(n)
        } else {
            MatchSize::FromGraph
        }
    }
}

/// Factor turning `⟨x⟩` into expected cooperators per match over the
/// threshold.
pub fn coop_scale(config: &GameConfig, structure: Structure<'_>) -> f64 {
    match config.threshold {
        Threshold::Relative(frac) => 1.0 / frac,
        Threshold::Absolute(m) => structure.mean_match_size(config) / m as f64,
    }
}

/// Seed of run `seed_index` at grid point `alpha_index`.
pub fn run_seed(global_seed: u64, alpha_index: usize, seed_index: usize) -> u64 {
    derive_seed(global_seed, &[alpha_index as u64, seed_index as u64])
}

/// Runs `n_seeds` simulations at every α of the grid and averages the
/// tail-averaged mean strategy over seeds.
pub fn alpha_sweep(
    network: &Network,
    base: &GameConfig,
    alphas: &[f64],
    n_seeds: usize,
    global_seed: u64,
) -> Result<SweepOutput> {
    if n_seeds == 0 {
        return Err(Error::invalid("n_seeds", "need at least one seed per alpha"));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::invalid("alphas", format!("every alpha must be positive, got {a}")));
    }
    if alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("alphas", "grid must be strictly increasing"));
    }
    base.validate()?;
    let structure = network.structure();
    let scale = coop_scale(base, structure);

    let jobs: Vec<(usize, usize)> = (0..alphas.len())
        .flat_map(|a| (0..n_seeds).map(move |s| (a, s)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(a, s)| {
            let seed = run_seed(global_seed, a, s);
            let config = GameConfig {
                seed,
                ..base.with_alpha(alphas[a])
            };
            let result = run_structure(&config, structure)?;
            Ok(SweepRecord {
                spec: network.spec.clone(),
                alpha: alphas[a],
                seed,
                scaled_coop: result.time_averaged_mean_x * scale,
                time_averaged_mean_x: result.time_averaged_mean_x,
                config,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let curve = records
        .chunks(n_seeds)
        .map(|runs| {
            let mean_x = runs.iter().map(|r| r.time_averaged_mean_x).sum::<f64>() / n_seeds as f64;
            CurvePoint {
                alpha: runs[0].alpha,
                mean_x,
                scaled_coop: mean_x * scale,
            }
        })
        .collect();
    Ok(SweepOutput { curve, records })
}
