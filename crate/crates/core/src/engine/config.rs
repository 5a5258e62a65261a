use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How many players take part in a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchSize {
    /// A vertex and all its neighbors.
    FromGraph,
    Fixed(usize),
}

/// Minimum number of cooperators for a match to pay out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Absolute(usize),
    /// Fraction of the match size, rounded up.
    Relative(f64),
}

impl Threshold {
    /// The number of cooperators required in a match of `match_size`.
    pub fn effective(&self, match_size: usize) -> Result<usize> {
        effective_threshold(match_size, *self)
    }
}

pub fn effective_threshold(match_size: usize, threshold: Threshold) -> Result<usize> {
    if match_size == 0 {
        return Err(Error::invalid("match_size", "must be at least 1"));
    }
    match threshold {
        Threshold::Absolute(m) if m > match_size => Err(Error::ThresholdExceedsMatch {
            threshold: m,
            match_size,
        }),
        Threshold::Absolute(m) => Ok(m.max(1)),
        Threshold::Relative(frac) => {
            // Guard against 7 · (2/7) landing a hair above 2.
            let raw = match_size as f64 * frac;
            let nearest = raw.round();
            let m = if (raw - nearest).abs() < 1e-9 { nearest } else { raw.ceil() };
            Ok((m as usize).clamp(1, match_size))
        }
    }
}

fn default_reward() -> f64 {
    1.0
}
fn default_dt() -> f64 {
    0.01
}
fn default_rounds() -> usize {
    100_000
}

/// All game and simulation parameters of a single run. `α = cost / reward`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub match_size: MatchSize,
    pub threshold: Threshold,
    #[serde(default = "default_reward")]
    pub reward: f64,
    pub cost: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    /// Amplitude of the additive Gaussian noise in the strategy update.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}

impl GameConfig {
    /// Unit reward, cost `alpha`, default `dt` and round count, no noise.
    pub fn new(match_size: MatchSize, threshold: Threshold, alpha: f64) -> Self {
        Self {
            match_size,
            threshold,
            reward: 1.0,
            cost: alpha,
            dt: default_dt(),
            rounds: default_rounds(),
            noise: 0.0,
            seed: 0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.cost / self.reward
    }

    /// Same configuration at a different cost-to-reward ratio.
    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self {
            cost: alpha * self.reward,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |field: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(field, format!("must be a positive real, got {v}")))
            }
        };
        positive("reward", self.reward)?;
        positive("cost", self.cost)?;
        positive("dt", self.dt)?;
        if self.rounds == 0 {
            return Err(Error::invalid("rounds", "must be positive"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::invalid("noise", format!("must be >= 0, got {}", self.noise)));
        }
        match self.threshold {
            Threshold::Absolute(0) => return Err(Error::invalid("threshold", "absolute M must be >= 1")),
            Threshold::Relative(f) if !(f > 0.0 && f <= 1.0) => {
                return Err(Error::invalid("threshold", format!("relative M must lie in (0, 1], got {f}")))
            }
            _ => {}
        }
        if let MatchSize::Fixed(n) = self.match_size {
            if n == 0 {
                return Err(Error::invalid("match_size", "fixed N must be >= 1"));
            }
            self.threshold.effective(n)?;
        }
        Ok(())
    }
}
