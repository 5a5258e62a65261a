//! Locating the cooperation collapse along α.

use serde::{Deserialize, Serialize};

use super::{alpha_sweep, CurvePoint, Network, SweepRecord};
use crate::engine::{GameConfig, Structure};
use crate::error::{Error, Result};
use crate::meanfield::alpha_max;
use crate::rng::{derive_seed, REFINE_DOMAIN};

/// Scaled cooperation level that marks the transition.
pub const CRIT_LEVEL: f64 = 0.1;

/// First downward crossing of [`CRIT_LEVEL`] after the curve's global
/// maximum, linearly interpolated between the bracketing grid points.
pub fn detect_alpha_crit(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::invalid("curve", "alpha values must be strictly increasing"));
    }
    let peak = curve
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |best, (k, &(_, v))| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((k, v)),
        });
    let Some((peak, peak_value)) = peak else {
        return Err(Error::NoCrossing {
            level: CRIT_LEVEL,
            reason: "empty curve".into(),
        });
    };
    if peak_value < CRIT_LEVEL {
        return Err(Error::NoCrossing {
            level: CRIT_LEVEL,
            reason: format!("curve never reaches the level (max {peak_value:.4})"),
        });
    }
    curve[peak..]
        .windows(2)
        .find(|w| w[0].1 >= CRIT_LEVEL && w[1].1 < CRIT_LEVEL)
        .map(|w| {
            let ((a0, v0), (a1, v1)) = (w[0], w[1]);
            a0 + (a1 - a0) * (v0 - CRIT_LEVEL) / (v0 - v1)
        })
        .ok_or_else(|| Error::NoCrossing {
            level: CRIT_LEVEL,
            reason: "curve never drops below the level".into(),
        })
}

/// Players per match and effective threshold that best describe a game on
/// `structure`, used to pick the mean-field reference.
pub fn nominal_game(config: &GameConfig, structure: Structure<'_>) -> Result<(u32, u32)> {
    let n = structure.mean_match_size(config).round().max(2.0) as usize;
    let m = config.threshold.effective(n)?;
    Ok((n as u32, m as u32))
}

fn snap(alpha: f64) -> f64 {
    (alpha * 1e10).round() / 1e10
}

/// `step, 2·step, …` up to `factor · alpha_max(n, m)`.
pub fn default_alpha_grid(n: u32, m: u32, step: f64, factor: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::invalid("alpha_step", "must be positive"));
    }
    let hi = factor * alpha_max(n, m)?;
    Ok((1..)
        .map(|k| snap(k as f64 * step))
        .take_while(|&a| a <= hi + 1e-12)
        .collect())
}

/// Parameters of a two-stage α_crit search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CritPlan {
    pub alpha_step: f64,
    /// Coarse grid ends at this multiple of the mean-field `alpha_max`.
    pub alpha_max_factor: f64,
    /// The coarse grid keeps growing while cooperation survives, up to here.
    pub alpha_ceiling: f64,
    pub refine_step: f64,
    pub n_seeds: usize,
    pub seed: u64,
}

impl Default for CritPlan {
    fn default() -> Self {
        Self {
            alpha_step: 0.02,
            alpha_max_factor: 1.1,
            alpha_ceiling: 1.0,
            refine_step: 0.005,
            n_seeds: 5,
            seed: 0,
        }
    }
}

/// Measured transition of one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CritResult {
    pub spec: crate::netgen::NetworkSpec,
    pub alpha_crit: f64,
    /// `(α, seed-averaged scaled cooperation)` over coarse and refined points.
    pub grid: Vec<(f64, f64)>,
    pub seeds_used: usize,
    #[serde(skip)]
    pub records: Vec<SweepRecord>,
}

fn pairs(curve: &[CurvePoint]) -> Vec<(f64, f64)> {
    curve.iter().map(|p| (p.alpha, p.scaled_coop)).collect()
}

/// Coarse sweep from the default grid, then a refined sweep between the two
/// grid points that bracket the crossing.
pub fn find_alpha_crit(network: &Network, base: &GameConfig, plan: &CritPlan) -> Result<CritResult> {
    if plan.n_seeds < 5 {
        return Err(Error::invalid("n_seeds", "alpha_crit needs at least 5 seeds per alpha"));
    }
    let (n, m) = nominal_game(base, network.structure())?;
    let mut grid = default_alpha_grid(n, m, plan.alpha_step, plan.alpha_max_factor)?;
    let mut coarse = alpha_sweep(network, base, &grid, plan.n_seeds, plan.seed)?;

    // Keep extending while the tail still cooperates.
    while coarse.curve.last().is_some_and(|p| p.scaled_coop >= CRIT_LEVEL) {
        let last = *grid.last().unwrap_or(&0.0);
        if last + plan.alpha_step > plan.alpha_ceiling + 1e-12 {
            break;
        }
        let first_new = grid.len();
        let extra: Vec<f64> = (1..=5)
            .map(|k| snap(last + k as f64 * plan.alpha_step))
            .filter(|&a| a <= plan.alpha_ceiling + 1e-12)
            .collect();
        grid.extend_from_slice(&extra);
        let more = alpha_sweep(network, base, &grid, plan.n_seeds, plan.seed)?;
        coarse.curve.extend_from_slice(&more.curve[first_new..]);
        coarse
            .records
            .extend(more.records.into_iter().skip(first_new * plan.n_seeds));
    }

    let mut merged = pairs(&coarse.curve);
    let first = detect_alpha_crit(&merged)?;
    let bracket = merged.windows(2).position(|w| w[0].0 <= first && first <= w[1].0);
    let mut records = coarse.records;
    if let Some(k) = bracket {
        let (lo, hi) = (merged[k].0, merged[k + 1].0);
        let fine: Vec<f64> = (1..)
            .map(|j| snap(lo + j as f64 * plan.refine_step))
            .take_while(|&a| a < hi - 1e-9)
            .collect();
        if !fine.is_empty() {
            let refine_seed = derive_seed(plan.seed, &[REFINE_DOMAIN]);
            let refined = alpha_sweep(network, base, &fine, plan.n_seeds, refine_seed)?;
            merged.extend(pairs(&refined.curve));
            merged.sort_by(|a, b| a.0.total_cmp(&b.0));
            records.extend(refined.records);
        }
    }
    records.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(a.seed.cmp(&b.seed)));
    Ok(CritResult {
        spec: network.spec.clone(),
        alpha_crit: detect_alpha_crit(&merged)?,
        grid: merged,
        seeds_used: plan.n_seeds,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::mf_prediction_curve;
    use proptest::prelude::*;

    #[test]
    fn interpolates_crossing() {
        let a = detect_alpha_crit(&[(0.1, 0.9), (0.2, 0.05)]).unwrap();
        assert!((a - (0.1 + 0.1 * 0.8 / 0.85)).abs() < 1e-15);
        assert!((a - 0.1941).abs() < 1e-4);
    }

    #[test]
    fn no_crossing_cases() {
        assert!(matches!(
            detect_alpha_crit(&[(0.1, 0.05), (0.2, 0.01)]),
            Err(Error::NoCrossing { .. })
        ));
        assert!(matches!(
            detect_alpha_crit(&[(0.1, 0.9), (0.2, 0.5)]),
            Err(Error::NoCrossing { .. })
        ));
        assert!(matches!(detect_alpha_crit(&[]), Err(Error::NoCrossing { .. })));
        assert!(detect_alpha_crit(&[(0.2, 0.9), (0.1, 0.0)]).is_err());
    }

    #[test]
    fn crossing_after_global_maximum() {
        // A noisy dip before the peak is ignored.
        let curve = [(0.1, 0.5), (0.2, 0.05), (0.3, 1.2), (0.4, 0.6), (0.5, 0.0)];
        let a = detect_alpha_crit(&curve).unwrap();
        assert!(a > 0.4 && a < 0.5);
    }

    #[test]
    fn mean_field_curve_crosses_at_alpha_max() {
        for (n, m) in [(7u32, 2u32), (5, 2), (9, 3), (4, 2)] {
            let amax = alpha_max(n, m).unwrap();
            let grid = default_alpha_grid(n, m, 0.02, 1.1).unwrap();
            let curve: Vec<(f64, f64)> = mf_prediction_curve(n, m, &grid)
                .unwrap()
                .iter()
                .map(|p| (p.alpha, p.upper_root * n as f64 / m as f64))
                .collect();
            let a = detect_alpha_crit(&curve).unwrap();
            assert!((a - amax).abs() <= 0.02, "N={n} M={m}: {a} vs {amax}");
        }
    }

    #[test]
    fn default_grid_shape() {
        let g = default_alpha_grid(7, 2, 0.02, 1.1).unwrap();
        assert_eq!(g[0], 0.02);
        assert_eq!(g[2], 0.06);
        assert!(*g.last().unwrap() <= 1.1 * alpha_max(7, 2).unwrap());
        assert_eq!(g.len(), 22);
    }

    proptest! {
        #[test]
        fn far_side_refinement_is_invisible(
            values in proptest::collection::vec(0.0f64..2.0, 3..12),
            extra in proptest::collection::vec(0.0f64..0.0999, 1..6),
        ) {
            let curve: Vec<(f64, f64)> = values.iter().enumerate().map(|(k, &v)| (0.1 * (k + 1) as f64, v)).collect();
            if let Ok(a) = detect_alpha_crit(&curve) {
                let k = curve.windows(2).position(|w| w[0].0 <= a && a <= w[1].0 && w[1].1 < CRIT_LEVEL).unwrap();
                // Sub-level points strictly beyond the bracket.
                let mut refined = curve.clone();
                let start = curve[k + 1].0;
                for (j, &v) in extra.iter().enumerate() {
                    refined.push((start + 0.01 * (j + 1) as f64 / (extra.len() + 1) as f64, v));
                }
                refined.sort_by(|a, b| a.0.total_cmp(&b.0));
                refined.dedup_by(|a, b| a.0 == b.0);
                prop_assert_eq!(detect_alpha_crit(&refined).unwrap(), a);
            }
        }
    }
}
