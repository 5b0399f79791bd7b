use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

/// Largest supported pattern memory. Patterns are packed into a `u32`.
pub const MAX_MEMORY: u32 = 30;

/// Every model parameter of a single run.
///
/// Defaults follow the population used for most of the figures of the
/// original model study (N=1000, two strategies each, alpha=10, holdings in
/// [-1, 1], a ten-step rolling mean) together with desk-scale horizons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarketConfig {
    pub n_agents: usize,
    pub ratio_ref: f64,
    pub memory: u32,
    pub n_strategies: usize,
    pub delta_t: usize,
    pub g_max: u32,
    pub alpha: f64,
    pub k_max: i32,
    pub k_min: i32,
    pub p0: f64,
    pub relax_steps: u64,
    pub measure_steps: u64,
    pub seed: u64,
}

impl Default for MarketConfig {
    fn default() -> Self {
        Self {
            n_agents: 1000,
            ratio_ref: 0.0,
            memory: 3,
            n_strategies: 2,
            delta_t: 10,
            g_max: 1000,
            alpha: 10.0,
            k_max: 1,
            k_min: -1,
            p0: 100.0,
            relax_steps: 20_000,
            measure_steps: 5_000,
            seed: 0,
        }
    }
}

impl MarketConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_agents == 0 {
            return Err(ConfigError::new("n_agents", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.ratio_ref) {
            return Err(ConfigError::new(
                "ratio_ref",
                format!("must lie in [0, 1], got {}", self.ratio_ref),
            ));
        }
        if self.memory == 0 || self.memory > MAX_MEMORY {
            return Err(ConfigError::new(
                "memory",
                format!("must lie in [1, {MAX_MEMORY}], got {}", self.memory),
            ));
        }
        if self.n_strategies == 0 {
            return Err(ConfigError::new("n_strategies", "must be positive"));
        }
        if self.delta_t == 0 {
            return Err(ConfigError::new("delta_t", "must be positive"));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(ConfigError::new(
                "alpha",
                format!("must be positive and finite, got {}", self.alpha),
            ));
        }
        if self.k_min > 0 {
            return Err(ConfigError::new(
                "k_min",
                format!("must be <= 0, got {}", self.k_min),
            ));
        }
        if self.k_max < 0 {
            return Err(ConfigError::new(
                "k_max",
                format!("must be >= 0, got {}", self.k_max),
            ));
        }
        if self.k_min >= self.k_max {
            return Err(ConfigError::new(
                "k_min",
                format!("must be below k_max ({} >= {})", self.k_min, self.k_max),
            ));
        }
        if !(self.p0.is_finite() && self.p0 > 0.0) {
            return Err(ConfigError::new(
                "p0",
                format!("must be positive and finite, got {}", self.p0),
            ));
        }
        Ok(())
    }

    /// Number of reference-point traders, `round(ratio_ref * n_agents)`.
    pub fn n_ref(&self) -> usize {
        (self.ratio_ref * self.n_agents as f64).round() as usize
    }

    pub fn n_pair(&self) -> usize {
        self.n_agents - self.n_ref()
    }

    pub fn total_steps(&self) -> u64 {
        self.relax_steps + self.measure_steps
    }
}
