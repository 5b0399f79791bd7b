use std::collections::HashMap;

use crate::error::AnalysisError;
use crate::market::{TickRecord, WealthLedger};

/// Frequency-weighted mean of the squared conditional mean of excess demand
/// given the history pattern: `H = sum_mu f(mu) * <A | mu>^2`.
///
/// Needs at least `2^M` ticks. Patterns that never occur contribute nothing.
pub fn predictability(records: &[TickRecord]) -> Result<f64, AnalysisError> {
    let Some(first) = records.first() else {
        return Err(AnalysisError::TooShort { needed: 1, got: 0 });
    };
    let needed = 1usize << first.pattern.len();
    if records.len() < needed {
        return Err(AnalysisError::TooShort {
            needed,
            got: records.len(),
        });
    }
    Ok(predictability_from(
        records.iter().map(|r| (r.pattern.code(), r.excess_demand)),
    )
    .expect("non-empty"))
}

/// [`predictability`] over raw `(pattern code, excess demand)` observations.
/// `None` when there are none.
pub fn predictability_from(observations: impl IntoIterator<Item = (u32, i64)>) -> Option<f64> {
    let mut classes: HashMap<u32, (i64, u64)> = HashMap::new();
    let mut total = 0u64;
    for (code, a) in observations {
        let e = classes.entry(code).or_default();
        e.0 += a;
        e.1 += 1;
        total += 1;
    }
    if total == 0 {
        return None;
    }
    // Sums are exact integers, so the result does not depend on tick order.
    let mut keys: Vec<_> = classes.keys().copied().collect();
    keys.sort_unstable();
    let h = keys
        .iter()
        .map(|k| {
            let (sum, n) = classes[k];
            let mean = sum as f64 / n as f64;
            n as f64 / total as f64 * mean * mean
        })
        .sum();
    Some(h)
}

/// Population standard deviation of raw prices.
pub fn price_stddev(prices: &[f64]) -> Result<f64, AnalysisError> {
    if prices.len() < 2 {
        return Err(AnalysisError::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    let n = prices.len() as f64;
    let mean = prices.iter().sum::<f64>() / n;
    let var = prices.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}

/// Mean realized wealth per population. `None` for an empty population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WealthSummary {
    pub pair: Option<f64>,
    pub reference: Option<f64>,
}

pub fn wealth_summary(pair: &[WealthLedger], reference: &[WealthLedger]) -> WealthSummary {
    fn mean(ls: &[WealthLedger]) -> Option<f64> {
        (!ls.is_empty()).then(|| ls.iter().map(|l| l.realized).sum::<f64>() / ls.len() as f64)
    }
    WealthSummary {
        pair: mean(pair),
        reference: mean(reference),
    }
}
