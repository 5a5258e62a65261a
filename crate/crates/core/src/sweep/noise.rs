//! Cooperation under the noisy update.

use serde::{Deserialize, Serialize};

use super::{alpha_sweep, Network};
use crate::engine::GameConfig;
use crate::error::{Error, Result};
use crate::netgen::NetworkKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub noise: f64,
    pub alpha: f64,
    pub kind: NetworkKind,
    pub mean_x: f64,
}

/// Seed-averaged `⟨x⟩` for every (noise amplitude, network, α).
///
/// Seeds do not depend on the amplitude, so the `A = 0` rows equal a plain
/// [`alpha_sweep`] with the same global seed.
pub fn noise_study(
    networks: &[Network],
    alphas: &[f64],
    amplitudes: &[f64],
    base: &GameConfig,
    n_seeds: usize,
    global_seed: u64,
) -> Result<Vec<NoiseRow>> {
    if networks.is_empty() || alphas.is_empty() || amplitudes.is_empty() {
        return Err(Error::invalid("noise_study", "networks, alphas and amplitudes must be non-empty"));
    }
    if let Some(a) = amplitudes.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
        return Err(Error::invalid("noise", format!("amplitudes must be finite and non-negative, got {a}")));
    }
    let mut rows = Vec::with_capacity(amplitudes.len() * networks.len() * alphas.len());
    for &noise in amplitudes {
        let config = GameConfig { noise, ..base.clone() };
        for network in networks {
            let out = alpha_sweep(network, &config, alphas, n_seeds, global_seed)?;
            rows.extend(out.curve.iter().map(|p| NoiseRow {
                noise,
                alpha: p.alpha,
                kind: network.spec.kind,
                mean_x: p.mean_x,
            }));
        }
    }
    Ok(rows)
}
