//! Transition point against match size on random regular networks.

use serde::{Deserialize, Serialize};

use super::{find_alpha_crit, CritPlan, Network};
use crate::engine::{effective_threshold, GameConfig, MatchSize, Threshold};
use crate::error::{Error, Result};
use crate::meanfield::alpha_max;
use crate::netgen::{NetworkKind, NetworkSpec};

/// How the threshold follows the match size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdepProtocol {
    /// The same `M` for every `N`.
    StaticM(usize),
    /// `M = ceil(ratio · N)`.
    FixedRatio(f64),
}

impl NdepProtocol {
    pub fn threshold_for(&self, n: usize) -> Result<usize> {
        match *self {
            NdepProtocol::StaticM(m) => effective_threshold(n, Threshold::Absolute(m)),
            NdepProtocol::FixedRatio(r) => effective_threshold(n, Threshold::Relative(r)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NdepProtocol::StaticM(_) => "static_m",
            NdepProtocol::FixedRatio(_) => "fixed_ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NdepRow {
    pub protocol: NdepProtocol,
    pub n: usize,
    pub m: usize,
    pub alpha_crit: f64,
    pub alpha_max: f64,
}

/// α_crit on random regular graphs of degree `N − 1` (so every match has
/// `N` players) for each `N` in `ns`, next to the mean-field bound.
pub fn n_dependence(
    ns: &[usize],
    protocol: NdepProtocol,
    size: usize,
    graph_seed: u64,
    base: &GameConfig,
    plan: &CritPlan,
) -> Result<Vec<NdepRow>> {
    if ns.is_empty() {
        return Err(Error::invalid("ns", "need at least one match size"));
    }
    ns.iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::invalid("ns", format!("match size must be at least 2, got {n}")));
            }
            let m = protocol.threshold_for(n)?;
            let spec = NetworkSpec::regular(NetworkKind::RandomRegular, size, n - 1, graph_seed);
            let network = Network::build(spec)?;
            let config = GameConfig {
                match_size: MatchSize::FromGraph,
                threshold: Threshold::Absolute(m),
                ..base.clone()
            };
            let crit = find_alpha_crit(&network, &config, plan)?;
            Ok(NdepRow {
                protocol,
                n,
                m,
                alpha_crit: crit.alpha_crit,
                alpha_max: alpha_max(n as u32, m as u32)?,
            })
        })
        .collect()
}
