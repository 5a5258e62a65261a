//! Effective population size: the fully mixed size whose transition matches
//! a structured population's.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{find_alpha_crit, nominal_game, CritPlan, Network};
use crate::engine::{GameConfig, MatchSize, Threshold};
use crate::error::{Error, Result};
use crate::netgen::{structure_metrics, NetworkSpec};

/// Outcome of an L search, before network metrics are attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeffFragment {
    pub l_eff: usize,
    pub alpha_crit_reference: f64,
    /// `|α_crit(FullyMixed, l_eff) − target|`.
    pub match_tolerance: f64,
    /// Every `(L, α_crit)` evaluated, in evaluation order.
    pub evaluations: Vec<(usize, f64)>,
}

fn geometric_mid(lo: usize, hi: usize) -> usize {
    let mid = ((lo as f64) * (hi as f64)).sqrt().round() as usize;
    mid.clamp(lo + 1, hi - 1)
}

/// Integer bisection for the population size whose fully mixed α_crit hits
/// `target`.
///
/// `crit_at(L)` must be non-decreasing in `L`. The endpoints are checked
/// first, and every interior evaluation must stay inside the endpoint
/// values (up to `tolerance`); otherwise the search stops with
/// [`Error::OutOfRange`].
pub fn find_l_eff<F>(target: f64, l_min: usize, l_max: usize, tolerance: f64, mut crit_at: F) -> Result<LeffFragment>
where
    F: FnMut(usize) -> Result<f64>,
{
    if l_min == 0 || l_min >= l_max {
        return Err(Error::invalid("l_range", format!("need 0 < l_min < l_max, got [{l_min}, {l_max}]")));
    }
    if !(tolerance >= 0.0) {
        return Err(Error::invalid("tolerance", "must be non-negative"));
    }
    let mut evaluations = Vec::new();
    let mut eval = |l: usize, evaluations: &mut Vec<(usize, f64)>| -> Result<f64> {
        let v = crit_at(l)?;
        evaluations.push((l, v));
        Ok(v)
    };
    let v_lo = eval(l_min, &mut evaluations)?;
    let v_hi = eval(l_max, &mut evaluations)?;
    if v_lo > v_hi + tolerance {
        return Err(Error::OutOfRange {
            target,
            reason: format!("alpha_crit is not monotone in L: {v_lo:.4} at L={l_min} vs {v_hi:.4} at L={l_max}"),
        });
    }
    if target < v_lo - tolerance {
        return Err(Error::OutOfRange {
            target,
            reason: format!("below alpha_crit {v_lo:.4} at L={l_min}"),
        });
    }
    if target > v_hi + tolerance {
        return Err(Error::OutOfRange {
            target,
            reason: format!("above alpha_crit {v_hi:.4} at L={l_max}"),
        });
    }

    let mut best = if (v_lo - target).abs() <= (v_hi - target).abs() {
        (l_min, v_lo)
    } else {
        (l_max, v_hi)
    };
    let (mut lo, mut hi) = (l_min, l_max);
    while (best.1 - target).abs() > tolerance && hi - lo > 1 {
        let mid = geometric_mid(lo, hi);
        let v = eval(mid, &mut evaluations)?;
        if v < v_lo - tolerance || v > v_hi + tolerance {
            return Err(Error::OutOfRange {
                target,
                reason: format!("alpha_crit is not monotone in L: {v:.4} at L={mid} outside [{v_lo:.4}, {v_hi:.4}]"),
            });
        }
        if (v - target).abs() < (best.1 - target).abs() {
            best = (mid, v);
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(LeffFragment {
        l_eff: best.0,
        alpha_crit_reference: best.1,
        match_tolerance: (best.1 - target).abs(),
        evaluations,
    })
}

/// Fully mixed α_crit as a function of population size at fixed `(N, M)`,
/// memoised per size.
#[derive(Debug, Clone)]
pub struct FullyMixedReference {
    n: usize,
    m: usize,
    base: GameConfig,
    plan: CritPlan,
    cache: BTreeMap<usize, f64>,
}

impl FullyMixedReference {
    /// `base` supplies the rule parameters (dt, rounds, noise, reward);
    /// match size and threshold are replaced by `n` and `m`.
    pub fn new(n: usize, m: usize, base: &GameConfig, plan: CritPlan) -> Result<Self> {
        let base = GameConfig {
            match_size: MatchSize::Fixed(n),
            threshold: Threshold::Absolute(m),
            ..base.clone()
        };
        base.validate()?;
        base.threshold.effective(n)?;
        Ok(Self {
            n,
            m,
            base,
            plan,
            cache: BTreeMap::new(),
        })
    }

    pub fn game(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn alpha_crit(&mut self, size: usize) -> Result<f64> {
        if let Some(&v) = self.cache.get(&size) {
            return Ok(v);
        }
        let net = Network::build(NetworkSpec::fully_mixed(size))?;
        let v = find_alpha_crit(&net, &self.base, &self.plan)?.alpha_crit;
        self.cache.insert(size, v);
        Ok(v)
    }

    /// Every size evaluated so far.
    pub fn evaluated(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.cache.iter().map(|(&l, &v)| (l, v))
    }
}

/// Structure metrics, measured transition and effective size of one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeffResult {
    pub spec: NetworkSpec,
    pub gamma: f64,
    pub mean_two_hop: f64,
    pub l_star: f64,
    pub alpha_crit_network: f64,
    pub l_eff: usize,
    pub alpha_crit_reference: f64,
    pub match_tolerance: f64,
}

/// Measures α_crit on `network` and searches `l_range` for the fully mixed
/// size that reproduces it. `reference` must play the network's nominal
/// `(N, M)` game.
pub fn leff_for_network(
    network: &Network,
    base: &GameConfig,
    plan: &CritPlan,
    reference: &mut FullyMixedReference,
    l_range: (usize, usize),
    tolerance: f64,
) -> Result<LeffResult> {
    let graph = network
        .graph
        .as_ref()
        .ok_or_else(|| Error::invalid("network", "effective size needs an explicit graph"))?;
    let (n, m) = nominal_game(base, network.structure())?;
    if reference.game() != (n as usize, m as usize) {
        return Err(Error::ConfigMismatch(format!(
            "network plays N={n}, M={m} but the reference plays N={}, M={}",
            reference.n, reference.m
        )));
    }
    let metrics = structure_metrics(graph);
    let crit = find_alpha_crit(network, base, plan)?;
    let frag = find_l_eff(crit.alpha_crit, l_range.0, l_range.1, tolerance, |l| reference.alpha_crit(l))?;
    Ok(LeffResult {
        spec: network.spec.clone(),
        gamma: metrics.mean_clustering,
        mean_two_hop: metrics.mean_two_hop,
        l_star: metrics.l_star,
        alpha_crit_network: crit.alpha_crit,
        l_eff: frag.l_eff,
        alpha_crit_reference: frag.alpha_crit_reference,
        match_tolerance: frag.match_tolerance,
    })
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("pearson", "inputs differ in length"));
    }
    if xs.len() < 2 {
        return Err(Error::invalid("pearson", "need at least two points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateVariance("first variable is constant".into()));
    }
    if syy == 0.0 {
        return Err(Error::DegenerateVariance("second variable is constant".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Correlation of `L_eff` against `L*` across networks.
pub fn correlate_leff_lstar(results: &[LeffResult]) -> Result<f64> {
    if results.len() < 3 {
        return Err(Error::invalid("results", "need at least three networks"));
    }
    let l_star: Vec<f64> = results.iter().map(|r| r.l_star).collect();
    let l_eff: Vec<f64> = results.iter().map(|r| r.l_eff as f64).collect();
    if l_star.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::DegenerateVariance("all networks share the same L*".into()));
    }
    pearson(&l_star, &l_eff)
}
