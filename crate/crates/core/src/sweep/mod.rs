//! Replicated parameter sweeps.
//!
//! Every (grid point, replication) pair runs with its own seed from
//! [`derive_seed`], so the output depends only on the [`SweepSpec`] and never on how
//! runs are scheduled across threads.

mod aggregate;
mod execute;
mod output;
mod seed;
mod spec;

pub use aggregate::{aggregate, AggregateRow, MetricStat};
pub use execute::{execute_sweep, execute_sweep_with, RowMetrics, RunKey, SweepOptions, SweepRow, METRIC_NAMES};
pub use output::{format_float, write_aggregate_csv, write_rows_csv};
pub use seed::derive_seed;
pub use spec::{apply_overrides, parse_override, GridParam, GridPoint, SweepSpec, CONFIG_KEYS};
