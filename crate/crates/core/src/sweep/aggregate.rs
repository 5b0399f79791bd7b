use std::collections::BTreeMap;

use super::execute::{SweepRow, METRIC_NAMES};
use super::spec::GridPoint;

/// Mean and standard error of one metric over the replications that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricStat {
    pub n: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation over `sqrt(n)`; absent for fewer than two values.
    pub stderr: Option<f64>,
}

impl MetricStat {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self::default();
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stderr = (n > 1).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        });
        Self {
            n,
            mean: Some(mean),
            stderr,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub grid_index: usize,
    pub point: GridPoint,
    pub n_ok: usize,
    pub n_errors: usize,
    /// In [`METRIC_NAMES`] order.
    pub metrics: [MetricStat; 7],
}

impl AggregateRow {
    pub fn metric(&self, name: &str) -> Option<&MetricStat> {
        METRIC_NAMES.iter().position(|m| *m == name).map(|i| &self.metrics[i])
    }
}

/// Per-grid-point reduction. Rows are grouped by grid index and reduced in
/// replication order, so the result does not depend on the input order.
/// Error rows are counted and otherwise ignored.
pub fn aggregate(rows: &[SweepRow]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<usize, Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.key.grid_index).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(grid_index, mut group)| {
            group.sort_by_key(|r| r.key.replication);
            let ok: Vec<_> = group.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
            let metrics = std::array::from_fn(|i| {
                let vals: Vec<f64> = ok.iter().filter_map(|m| m.values()[i]).collect();
                MetricStat::from_values(&vals)
            });
            AggregateRow {
                grid_index,
                point: group[0].key.point.clone(),
                n_ok: ok.len(),
                n_errors: group.len() - ok.len(),
                metrics,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{RowMetrics, RunKey};

    fn row(g: usize, r: usize, sigma: Option<f64>) -> SweepRow {
        SweepRow {
            key: RunKey {
                grid_index: g,
                replication: r,
                seed: 0,
                point: GridPoint(vec![]),
            },
            outcome: match sigma {
                Some(s) => Ok(RowMetrics {
                    sigma_p: Some(s),
                    ..Default::default()
                }),
                None => Err("boom".into()),
            },
            wall_time_ms: None,
        }
    }

    #[test]
    fn single_replication_has_no_stderr() {
        let a = aggregate(&[row(0, 0, Some(4.0))]);
        let s = a[0].metric("sigma_p").unwrap();
        assert_eq!((s.mean, s.stderr), (Some(4.0), None));
    }

    #[test]
    fn two_replications() {
        let a = aggregate(&[row(0, 0, Some(1.0)), row(0, 1, Some(3.0))]);
        let s = a[0].metric("sigma_p").unwrap();
        assert_eq!(s.mean, Some(2.0));
        assert!((s.stderr.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(a[0].metric("w_ref").unwrap().mean, None);
    }

    #[test]
    fn errors_are_counted_not_averaged() {
        let a = aggregate(&[row(0, 0, Some(1.0)), row(0, 1, None), row(1, 0, None)]);
        assert_eq!((a[0].n_ok, a[0].n_errors), (1, 1));
        assert_eq!(a[0].metrics[0].mean, Some(1.0));
        assert_eq!((a[1].n_ok, a[1].n_errors), (0, 1));
        assert_eq!(a[1].metrics[0].mean, None);
    }
}
