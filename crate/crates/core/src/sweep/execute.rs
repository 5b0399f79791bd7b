use std::time::Instant;

use rayon::prelude::*;

use super::seed::derive_seed;
use super::spec::{GridPoint, SweepSpec};
use crate::analysis::AnalysisReport;
use crate::error::{ConfigError, SimError};
use crate::market::{run, rng_from_seed, RunOutput};

pub const METRIC_NAMES: [&str; 7] = [
    "sigma_p",
    "predictability",
    "gamma_abs",
    "hurst_returns",
    "hurst_abs",
    "w_pair",
    "w_ref",
];

/// Per-run statistics over the measured segment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RowMetrics {
    pub sigma_p: Option<f64>,
    pub predictability: Option<f64>,
    pub gamma_abs: Option<f64>,
    pub hurst_returns: Option<f64>,
    pub hurst_abs: Option<f64>,
    pub w_pair: Option<f64>,
    pub w_ref: Option<f64>,
}

impl RowMetrics {
    pub fn from_report(r: &AnalysisReport) -> Self {
        Self {
            sigma_p: r.sigma_p,
            predictability: r.predictability,
            gamma_abs: r.gamma(),
            hurst_returns: r.hurst_returns(),
            hurst_abs: r.hurst_abs(),
            w_pair: r.w_pair,
            w_ref: r.w_ref,
        }
    }

    /// Values in [`METRIC_NAMES`] order.
    pub fn values(&self) -> [Option<f64>; 7] {
        [
            self.sigma_p,
            self.predictability,
            self.gamma_abs,
            self.hurst_returns,
            self.hurst_abs,
            self.w_pair,
            self.w_ref,
        ]
    }
}

/// Identifies one run of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunKey {
    pub grid_index: usize,
    pub replication: usize,
    pub seed: u64,
    pub point: GridPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub key: RunKey,
    /// Metrics, or the error message of a failed run.
    pub outcome: Result<RowMetrics, String>,
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub parallelism: usize,
    /// Wall time is the only nondeterministic output, so it is opt-in.
    pub record_wall_time: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            parallelism: 1,
            record_wall_time: false,
        }
    }
}

pub fn execute_sweep(spec: &SweepSpec, opts: SweepOptions) -> Result<Vec<SweepRow>, ConfigError> {
    execute_sweep_with(spec, opts, |_, _| {})
}

/// Runs every (grid point, replication) and returns rows in canonical order,
/// grid-major and replication-minor. `on_run` sees each successful run before
/// its output is dropped; it may be called from several threads.
pub fn execute_sweep_with<F>(
    spec: &SweepSpec,
    opts: SweepOptions,
    on_run: F,
) -> Result<Vec<SweepRow>, ConfigError>
where
    F: Fn(&RunKey, &RunOutput) + Sync,
{
    if spec.replications == 0 {
        return Err(ConfigError::new("replications", "must be at least 1"));
    }
    if opts.parallelism == 0 {
        return Err(ConfigError::new("parallelism", "must be at least 1"));
    }
    let keys: Vec<RunKey> = spec
        .points()
        .into_iter()
        .enumerate()
        .flat_map(|(g, point)| {
            (0..spec.replications).map(move |r| RunKey {
                grid_index: g,
                replication: r,
                seed: derive_seed(spec.master_seed, g as u64, r as u64),
                point: point.clone(),
            })
        })
        .collect();

    let one = |key: RunKey| -> SweepRow {
        let started = Instant::now();
        let mut config = key.point.apply(&spec.base);
        config.seed = key.seed;
        let outcome = run(&config, &mut rng_from_seed(key.seed))
            .map(|out| {
                on_run(&key, &out);
                RowMetrics::from_report(&AnalysisReport::from_run(&out))
            })
            .map_err(|e: SimError| e.to_string());
        SweepRow {
            key,
            outcome,
            wall_time_ms: opts
                .record_wall_time
                .then(|| started.elapsed().as_secs_f64() * 1e3),
        }
    };

    if opts.parallelism == 1 {
        return Ok(keys.into_iter().map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism)
        .build()
        .map_err(|e| ConfigError::new("parallelism", e.to_string()))?;
    // indexed collect keeps canonical order whatever the completion order
    Ok(pool.install(|| keys.into_par_iter().map(one).collect()))
}
