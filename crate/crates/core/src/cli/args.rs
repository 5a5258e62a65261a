use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::netgen::NetworkKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum KindArg {
    FullyMixed,
    RandomRegular,
    RingLocal,
    RingLongRange,
    Social,
}

impl From<KindArg> for NetworkKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::FullyMixed => NetworkKind::FullyMixed,
            KindArg::RandomRegular => NetworkKind::RandomRegular,
            KindArg::RingLocal => NetworkKind::RingLocal,
            KindArg::RingLongRange => NetworkKind::RingLongRange,
            KindArg::Social => NetworkKind::Social,
        }
    }
}

/// Network description shared by the simulation subcommands.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkFlags {
    /// Population structure.
    #[arg(long)]
    pub kind: Option<KindArg>,
    /// Population size.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub size: Option<usize>,
    /// Vertex degree (regular kinds).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Social growth: extra initial contacts.
    #[arg(long)]
    pub f1: Option<f64>,
    /// Social growth: extra secondary contacts.
    #[arg(long)]
    pub f2: Option<f64>,
    /// Graph generator seed (defaults to --seed).
    #[arg(long)]
    pub net_seed: Option<u64>,
}

/// Game rule parameters shared by the simulation subcommands.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct GameFlags {
    /// Players per match (required when fully mixed; taken from the graph otherwise).
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Absolute threshold.
    #[arg(long = "M", conflicts_with = "m_rel")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Threshold as a fraction of the match size.
    #[arg(long = "M-rel")]
    #[serde(rename = "M_rel")]
    pub m_rel: Option<f64>,
    /// Reward r (cost is α·r).
    #[arg(long)]
    pub reward: Option<f64>,
    /// Integration step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Rounds per simulation.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Noise amplitude A.
    #[arg(long)]
    pub noise: Option<f64>,
    /// 10^5 rounds and L = 300 instead of 10^4 rounds and L = 200.
    #[arg(long)]
    pub full_scale: bool,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct NetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkFlags,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge-list file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct MeanfieldArgs {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u32>,
    #[arg(long = "M", conflicts_with = "m_rel")]
    #[serde(rename = "M")]
    pub m: Option<u32>,
    #[arg(long = "M-rel")]
    #[serde(rename = "M_rel")]
    pub m_rel: Option<f64>,
    /// Print only the largest α with a mixed equilibrium.
    #[arg(long)]
    pub alpha_max_only: bool,
    /// First α of the table (defaults to the step).
    #[arg(long)]
    pub alpha_start: Option<f64>,
    /// Last α of the table (defaults to 1.1·alpha_max).
    #[arg(long)]
    pub alpha_stop: Option<f64>,
    #[arg(long)]
    pub alpha_step: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct RunArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkFlags,
    /// Read the graph from an edge-list file instead of generating it.
    #[arg(long, conflicts_with = "kind")]
    pub edge_list: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameFlags,
    /// Cost-to-reward ratio α.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rounds between checkpoint records.
    #[arg(long)]
    pub checkpoint_every: Option<usize>,
    /// Also write the full `round,mean_x` trajectory here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Settings of an α_crit search.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct CritFlags {
    /// Simulations per α.
    #[arg(long)]
    pub n_seeds: Option<usize>,
    /// Coarse α grid spacing.
    #[arg(long)]
    pub alpha_step: Option<f64>,
    /// Grid spacing around the detected crossing.
    #[arg(long)]
    pub refine_step: Option<f64>,
    /// Global seed all run seeds derive from.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub crit: CritFlags,
    /// Explicit α grid; the default grid is refined around the crossing.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One network of a `leff` batch, as given in a config document.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkEntry {
    pub kind: Option<KindArg>,
    #[serde(rename = "L")]
    pub size: Option<usize>,
    pub degree: Option<usize>,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub net_seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct LeffArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub network: NetworkFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameFlags,
    #[command(flatten)]
    #[serde(flatten)]
    pub crit: CritFlags,
    /// Smallest fully mixed size searched (defaults to N).
    #[arg(long)]
    pub l_min: Option<usize>,
    /// Largest fully mixed size searched.
    #[arg(long)]
    pub l_max: Option<usize>,
    /// Accepted α_crit mismatch.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Batch of networks (config document only); replaces the network flags.
    #[arg(skip)]
    pub networks: Option<Vec<NetworkEntry>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct NdepArgs {
    /// Match sizes to scan.
    #[arg(long = "Ns", value_delimiter = ',')]
    #[serde(rename = "Ns")]
    pub ns: Option<Vec<usize>>,
    /// Threshold of the static protocol.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Threshold ratio of the fixed-ratio protocol.
    #[arg(long = "M-rel")]
    #[serde(rename = "M_rel")]
    pub m_rel: Option<f64>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub size: Option<usize>,
    #[arg(long)]
    pub net_seed: Option<u64>,
    /// Rounds per simulation.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Integration step.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub full_scale: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub crit: CritFlags,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseArgs {
    /// The network kinds compared.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<KindArg>>,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub size: Option<usize>,
    /// Degree of the graph kinds; fully mixed plays degree + 1 players.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Noise amplitudes A.
    #[arg(long, value_delimiter = ',')]
    pub amplitudes: Option<Vec<f64>>,
    #[arg(long)]
    pub n_seeds: Option<usize>,
    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub net_seed: Option<u64>,
    /// Rounds per simulation.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub full_scale: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
