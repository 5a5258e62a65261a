//! One round of play: action sampling, match assembly, payoffs, the
//! per-individual payoff observations and the strategy update.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::netgen::AdjacencyGraph;

/// Strategies and the carried payoff observations of every individual.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    /// Probability of cooperating.
    pub x: Vec<f64>,
    /// Most recent average payoff of encountered cooperators.
    pub last_fc: Vec<f64>,
    /// Most recent average payoff of encountered defectors.
    pub last_fd: Vec<f64>,
}

impl Population {
    /// Carried observations start at zero.
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid("strategies", format!("{bad} outside [0, 1]")));
        }
        let n = x.len();
        Ok(Self {
            x,
            last_fc: vec![0.0; n],
            last_fd: vec![0.0; n],
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn mean_x(&self) -> f64 {
        self.x.iter().sum::<f64>() / self.x.len() as f64
    }
}

/// Draws each individual's action for the round (`true` = cooperate) from
/// its own stream.
pub fn sample_actions<R: Rng>(x: &[f64], streams: &mut [R], actions: &mut Vec<bool>) {
    actions.clear();
    actions.extend(
        x.iter()
            .zip(streams.iter_mut())
            .map(|(&p, rng)| rng.random::<f64>() < p),
    );
}

/// Participant lists of the matches in a round, stored contiguously.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matches {
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl Matches {
    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, k: usize) -> &[usize] {
        &self.members[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.len()).map(move |k| self.get(k))
    }

    fn clear(&mut self) {
        self.offsets.clear();
        self.members.clear();
        self.offsets.push(0);
    }

    fn close(&mut self) {
        self.offsets.push(self.members.len());
    }

    /// Match `i` is vertex `i` followed by its neighbors.
    pub fn from_graph(graph: &AdjacencyGraph) -> Self {
        let mut out = Matches::default();
        out.clear();
        for v in 0..graph.vertex_count() {
            out.members.push(v);
            out.members.extend_from_slice(graph.neighbors(v));
            out.close();
        }
        out
    }

    /// `size` matches of `match_size` distinct individuals drawn uniformly
    /// from the whole population. `scratch` holds a permutation of
    /// `0..size` that is partially shuffled in place for every match.
    pub fn fill_fully_mixed<R: Rng>(&mut self, size: usize, match_size: usize, scratch: &mut Vec<usize>, rng: &mut R) {
        debug_assert!(match_size <= size);
        if scratch.len() != size {
            scratch.clear();
            scratch.extend(0..size);
        }
        self.clear();
        for _ in 0..size {
            for k in 0..match_size {
                let j = rng.random_range(k..size);
                scratch.swap(k, j);
            }
            self.members.extend_from_slice(&scratch[..match_size]);
            self.close();
        }
    }
}

/// Builds the match list of one round.
///
/// A graph yields one match per vertex. Without a graph the population is
/// fully mixed and `match_size` players are sampled per match; a given
/// individual may then play several matches or none.
pub fn assemble_matches<R: Rng>(
    graph: Option<&AdjacencyGraph>,
    size: usize,
    match_size: Option<usize>,
    rng: &mut R,
) -> Result<Matches> {
    match (graph, match_size) {
        (Some(g), None) => Ok(Matches::from_graph(g)),
        (Some(g), Some(n)) => {
            if g.degrees().iter().any(|&d| d + 1 != n) {
                return Err(Error::ConfigMismatch(format!(
                    "fixed match size {n} disagrees with the graph degrees"
                )));
            }
            Ok(Matches::from_graph(g))
        }
        (None, Some(n)) => {
            if n > size {
                return Err(Error::ConfigMismatch(format!(
                    "match size {n} exceeds population size {size}"
                )));
            }
            let mut m = Matches::default();
            m.fill_fully_mixed(size, n, &mut Vec::new(), rng);
            Ok(m)
        }
        (None, None) => Err(Error::ConfigMismatch(
            "a fully mixed population needs a fixed match size".into(),
        )),
    }
}

#[inline]
fn member_payoff(cooperated: bool, success: bool, reward: f64, cost: f64) -> f64 {
    let gain = if success { reward } else { 0.0 };
    gain - cost * (cooperated as u8 as f64)
}

/// Every member earns `reward` if at least `threshold` members cooperate;
/// cooperators pay `cost` either way.
pub fn play_match(members: &[usize], actions: &[bool], threshold: usize, reward: f64, cost: f64) -> Vec<f64> {
    let cooperators = members.iter().filter(|&&i| actions[i]).count();
    let success = cooperators >= threshold;
    members
        .iter()
        .map(|&i| member_payoff(actions[i], success, reward, cost))
        .collect()
}

/// Per-round bookkeeping of actions, match counts and payoffs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoundLedger {
    pub action: Vec<bool>,
    pub matches_played: Vec<u32>,
    pub payoff_total: Vec<f64>,
}

impl RoundLedger {
    pub fn new(size: usize) -> Self {
        Self {
            action: vec![false; size],
            matches_played: vec![0; size],
            payoff_total: vec![0.0; size],
        }
    }

    pub fn reset(&mut self) {
        self.matches_played.iter_mut().for_each(|m| *m = 0);
        self.payoff_total.iter_mut().for_each(|p| *p = 0.0);
    }

    /// Plays one match and books its payoffs.
    pub fn record_match(&mut self, members: &[usize], threshold: usize, reward: f64, cost: f64) {
        let cooperators: usize = members.iter().map(|&i| self.action[i] as usize).sum();
        let success = cooperators >= threshold;
        for &i in members {
            self.matches_played[i] += 1;
            self.payoff_total[i] += member_payoff(self.action[i], success, reward, cost);
        }
    }

    /// Average payoff per match, zero for individuals that did not play.
    pub fn mean_payoff(&self, i: usize) -> f64 {
        match self.matches_played[i] {
            0 => 0.0,
            k => self.payoff_total[i] / k as f64,
        }
    }
}

/// For every individual, the distinct individuals met in its matches this
/// round, itself included, in ascending order.
#[derive(Debug, Clone, Default)]
pub struct Encounters {
    offsets: Vec<usize>,
    members: Vec<usize>,
    // Scratch space reused across rebuilds: one bitset per match and one
    // per individual.
    match_bits: Vec<u64>,
    seen_bits: Vec<u64>,
}

impl Encounters {
    pub fn from_matches(matches: &Matches, size: usize) -> Self {
        let mut e = Encounters::default();
        e.rebuild(matches, size);
        e
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.members[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn rebuild(&mut self, matches: &Matches, size: usize) {
        let words = size.div_ceil(64);
        self.match_bits.clear();
        self.match_bits.resize(matches.len() * words, 0);
        self.seen_bits.clear();
        self.seen_bits.resize(size * words, 0);

        for (k, m) in matches.iter().enumerate() {
            let bits = &mut self.match_bits[k * words..(k + 1) * words];
            for &j in m {
                bits[j / 64] |= 1 << (j % 64);
            }
        }
        for (k, m) in matches.iter().enumerate() {
            let bits = &self.match_bits[k * words..(k + 1) * words];
            for &i in m {
                let seen = &mut self.seen_bits[i * words..(i + 1) * words];
                seen.iter_mut().zip(bits).for_each(|(s, b)| *s |= b);
            }
        }

        self.offsets.clear();
        self.members.clear();
        self.offsets.push(0);
        for i in 0..size {
            for (w, &word) in self.seen_bits[i * words..(i + 1) * words].iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    self.members.push(w * 64 + rest.trailing_zeros() as usize);
                    rest &= rest - 1;
                }
            }
            self.offsets.push(self.members.len());
        }
    }
}

/// Refreshes every individual's `(f_C, f_D)` from the round just played.
///
/// `f_C` is the mean, over encountered cooperators, of each one's average
/// payoff per match; `f_D` likewise for defectors. A category with no
/// encountered member keeps its carried value.
pub fn accumulate_and_average(ledger: &RoundLedger, encounters: &Encounters, pop: &mut Population) {
    let size = pop.len();
    let mean: Vec<f64> = (0..size).map(|j| ledger.mean_payoff(j)).collect();
    let coop: Vec<f64> = ledger.action.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
    for i in 0..size {
        let (mut sum_c, mut n_c, mut sum_d, mut n_d) = (0.0, 0.0, 0.0, 0.0);
        // Branch-free: actions are coin flips, so branches mispredict.
        for &j in encounters.get(i) {
            let c = coop[j];
            let d = 1.0 - c;
            sum_c += c * mean[j];
            n_c += c;
            sum_d += d * mean[j];
            n_d += d;
        }
        if n_c > 0.0 {
            pop.last_fc[i] = sum_c / n_c;
        }
        if n_d > 0.0 {
            pop.last_fd[i] = sum_d / n_d;
        }
    }
}

/// Replicator-style update `x += x(1−x)(f_C − f_D)·dt + A·μ`, clamped to
/// `[0, 1]`, applied to all individuals at once. Noise is drawn from each
/// individual's stream only when `noise > 0`.
pub fn update_strategies<R: Rng>(pop: &mut Population, dt: f64, noise: f64, streams: &mut [R]) {
    for (i, rng) in streams.iter_mut().enumerate().take(pop.len()) {
        let x = pop.x[i];
        let mut next = x + x * (1.0 - x) * (pop.last_fc[i] - pop.last_fd[i]) * dt;
        if noise > 0.0 {
            let mu: f64 = rng.sample(StandardNormal);
            next += noise * mu;
        }
        pop.x[i] = next.clamp(0.0, 1.0);
    }
}
