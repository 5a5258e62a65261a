use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{GameConfig, MatchSize};
use super::round::{
    accumulate_and_average, sample_actions, update_strategies, Encounters, Matches, Population, RoundLedger,
};
use crate::error::{Error, Result};
use crate::netgen::{AdjacencyGraph, NetworkKind, NetworkSpec};
use crate::rng::{domain_stream, individual_stream, MATCH_DOMAIN};

/// Who plays with whom.
#[derive(Debug, Clone, Copy)]
pub enum Structure<'g> {
    FullyMixed { size: usize },
    Graph(&'g AdjacencyGraph),
}

impl Structure<'_> {
    pub fn size(&self) -> usize {
        match self {
            Structure::FullyMixed { size } => *size,
            Structure::Graph(g) => g.vertex_count(),
        }
    }

    /// Nominal number of players per match: the fixed size for fully mixed
    /// populations, the mean closed-neighborhood size on graphs.
    pub fn mean_match_size(&self, config: &GameConfig) -> f64 {
        match (self, config.match_size) {
            (_, MatchSize::Fixed(n)) => n as f64,
            (Structure::Graph(g), MatchSize::FromGraph) => g.mean_degree() + 1.0,
            (Structure::FullyMixed { .. }, MatchSize::FromGraph) => f64::NAN,
        }
    }
}

/// Summary of a completed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Population mean strategy after each round.
    pub mean_x_trajectory: Vec<f64>,
    pub final_mean_x: f64,
    /// Mean of the trajectory over its final tenth.
    pub time_averaged_mean_x: f64,
    pub config_echo: GameConfig,
    /// `None` when the graph did not come from a generator spec.
    pub network_echo: Option<NetworkSpec>,
}

/// Mean of the last `ceil(len / 10)` entries.
pub fn tail_average(trajectory: &[f64]) -> f64 {
    if trajectory.is_empty() {
        return f64::NAN;
    }
    let tail = trajectory.len().div_ceil(10).max(1);
    let slice = &trajectory[trajectory.len() - tail..];
    slice.iter().sum::<f64>() / slice.len() as f64
}

enum MatchPlan {
    Static {
        matches: Matches,
        thresholds: Vec<usize>,
        encounters: Encounters,
    },
    Mixed {
        match_size: usize,
        threshold: usize,
        matches: Matches,
        encounters: Encounters,
        scratch: Vec<usize>,
        rng: ChaCha8Rng,
    },
}

/// Round-by-round simulation state.
///
/// Random-stream discipline: individual `i` owns a ChaCha8 stream selected by
/// its stream key (by default its index). From that stream it draws its
/// initial strategy, then each round one uniform for its action and, when
/// noise is on, one standard normal for its update. Match assembly in fully
/// mixed populations uses a separate stream. Relabeling individuals together
/// with their keys therefore relabels the whole run.
pub struct Simulation {
    config: GameConfig,
    plan: MatchPlan,
    pop: Population,
    streams: Vec<ChaCha8Rng>,
    ledger: RoundLedger,
    round: usize,
}

impl Simulation {
    pub fn new(config: &GameConfig, structure: Structure<'_>) -> Result<Self> {
        let keys: Vec<u64> = (0..structure.size() as u64).collect();
        Self::with_stream_keys(config, structure, &keys)
    }

    pub fn with_stream_keys(config: &GameConfig, structure: Structure<'_>, keys: &[u64]) -> Result<Self> {
        config.validate()?;
        let size = structure.size();
        if size == 0 {
            return Err(Error::invalid("size", "population must not be empty"));
        }
        if keys.len() != size {
            return Err(Error::invalid("stream_keys", format!("need {size} keys, got {}", keys.len())));
        }
        let plan = match (structure, config.match_size) {
            (Structure::FullyMixed { .. }, MatchSize::FromGraph) => {
                return Err(Error::ConfigMismatch(
                    "a fully mixed population needs a fixed match size".into(),
                ))
            }
            (Structure::FullyMixed { size }, MatchSize::Fixed(n)) => {
                if n > size {
                    return Err(Error::ConfigMismatch(format!(
                        "match size {n} exceeds population size {size}"
                    )));
                }
                MatchPlan::Mixed {
                    match_size: n,
                    threshold: config.threshold.effective(n)?,
                    matches: Matches::default(),
                    encounters: Encounters::default(),
                    scratch: Vec::new(),
                    rng: domain_stream(config.seed, MATCH_DOMAIN),
                }
            }
            (Structure::Graph(g), rule) => {
                if let MatchSize::Fixed(n) = rule {
                    if g.degrees().iter().any(|&d| d + 1 != n) {
                        return Err(Error::ConfigMismatch(format!(
                            "fixed match size {n} disagrees with the graph degrees"
                        )));
                    }
                }
                let matches = Matches::from_graph(g);
                let thresholds = matches
                    .iter()
                    .map(|m| config.threshold.effective(m.len()))
                    .collect::<Result<Vec<_>>>()?;
                let encounters = Encounters::from_matches(&matches, size);
                MatchPlan::Static {
                    matches,
                    thresholds,
                    encounters,
                }
            }
        };

        let mut streams: Vec<ChaCha8Rng> = keys.iter().map(|&k| individual_stream(config.seed, k)).collect();
        let x: Vec<f64> = streams.iter_mut().map(|rng| rng.random::<f64>()).collect();
        Ok(Self {
            config: config.clone(),
            plan,
            pop: Population::new(x)?,
            streams,
            ledger: RoundLedger::new(size),
            round: 0,
        })
    }

    /// Replaces the initial strategies.
    pub fn set_strategies(&mut self, x: Vec<f64>) -> Result<()> {
        if x.len() != self.pop.len() {
            return Err(Error::invalid("strategies", "length differs from population size"));
        }
        self.pop = Population::new(x)?;
        Ok(())
    }

    pub fn population(&self) -> &Population {
        &self.pop
    }

    pub fn ledger(&self) -> &RoundLedger {
        &self.ledger
    }

    pub fn rounds_played(&self) -> usize {
        self.round
    }

    /// Plays one round and applies the simultaneous update. Returns the new
    /// mean strategy.
    pub fn step(&mut self) -> f64 {
        let size = self.pop.len();
        let (reward, cost) = (self.config.reward, self.config.cost);
        sample_actions(&self.pop.x, &mut self.streams, &mut self.ledger.action);
        self.ledger.reset();

        let encounters = match &mut self.plan {
            MatchPlan::Static {
                matches,
                thresholds,
                encounters,
            } => {
                for (k, members) in matches.iter().enumerate() {
                    self.ledger.record_match(members, thresholds[k], reward, cost);
                }
                &*encounters
            }
            MatchPlan::Mixed {
                match_size,
                threshold,
                matches,
                encounters,
                scratch,
                rng,
            } => {
                matches.fill_fully_mixed(size, *match_size, scratch, rng);
                for members in matches.iter() {
                    self.ledger.record_match(members, *threshold, reward, cost);
                }
                encounters.rebuild(matches, size);
                &*encounters
            }
        };
        accumulate_and_average(&self.ledger, encounters, &mut self.pop);
        update_strategies(&mut self.pop, self.config.dt, self.config.noise, &mut self.streams);
        debug_assert!(self.pop.x.iter().all(|v| (0.0..=1.0).contains(v)));
        self.round += 1;
        self.pop.mean_x()
    }

    /// Plays the configured number of rounds and returns the trajectory of
    /// the mean strategy.
    pub fn run(&mut self) -> Vec<f64> {
        (0..self.config.rounds).map(|_| self.step()).collect()
    }
}

/// Runs a full simulation of `config` on the structure described by `spec`.
///
/// `graph` must be present for every family except fully mixed; it is
/// typically `spec.build()?`, but any graph of matching size is accepted.
pub fn run_simulation(config: &GameConfig, spec: &NetworkSpec, graph: Option<&AdjacencyGraph>) -> Result<SimResult> {
    let structure = match (spec.kind, graph) {
        (NetworkKind::FullyMixed, _) => Structure::FullyMixed { size: spec.size },
        (_, Some(g)) if g.vertex_count() == spec.size => Structure::Graph(g),
        (_, Some(g)) => {
            return Err(Error::ConfigMismatch(format!(
                "graph has {} vertices, spec says {}",
                g.vertex_count(),
                spec.size
            )))
        }
        (kind, None) => return Err(Error::ConfigMismatch(format!("{kind} requires a graph"))),
    };
    let mut result = run_structure(config, structure)?;
    result.network_echo = Some(spec.clone());
    Ok(result)
}

/// Like [`run_simulation`] for a structure without a generator spec.
pub fn run_structure(config: &GameConfig, structure: Structure<'_>) -> Result<SimResult> {
    let mut sim = Simulation::new(config, structure)?;
    let trajectory = sim.run();
    Ok(SimResult {
        final_mean_x: *trajectory.last().expect("rounds > 0"),
        time_averaged_mean_x: tail_average(&trajectory),
        mean_x_trajectory: trajectory,
        config_echo: config.clone(),
        network_echo: None,
    })
}
