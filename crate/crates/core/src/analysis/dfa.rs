//! First-order detrended fluctuation analysis.

use super::linear_fit;
use crate::error::AnalysisError;

pub const MIN_DFA_LEN: usize = 64;
const MIN_SCALE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct DfaResult {
    pub scales: Vec<usize>,
    pub fluctuation: Vec<f64>,
    /// Slope of `ln F(S)` against `ln S`.
    pub hurst: f64,
    pub r_squared: f64,
}

/// Window sizes `4, 8, 16, ...` up to `len / 4`.
pub fn dfa_scales(len: usize) -> Vec<usize> {
    std::iter::successors(Some(MIN_SCALE), |s| s.checked_mul(2))
        .take_while(|&s| s <= len / 4)
        .collect()
}

/// DFA-1: integrate the demeaned series, cut the profile into non-overlapping
/// windows (remainder dropped at the end), remove a least-squares line from
/// each window and take the RMS residual per scale.
pub fn dfa(series: &[f64]) -> Result<DfaResult, AnalysisError> {
    if series.len() < MIN_DFA_LEN {
        return Err(AnalysisError::TooShort {
            needed: MIN_DFA_LEN,
            got: series.len(),
        });
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(AnalysisError::Degenerate("non-finite value in series"));
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let profile: Vec<f64> = series
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x - mean;
            Some(*acc)
        })
        .collect();

    let scales = dfa_scales(series.len());
    let fluctuation: Vec<f64> = scales.iter().map(|&s| fluctuation_at(&profile, s)).collect();
    if fluctuation.iter().any(|&f| !(f > 0.0)) {
        return Err(AnalysisError::Degenerate("zero fluctuation at some scale"));
    }

    let lx: Vec<f64> = scales.iter().map(|&s| (s as f64).ln()).collect();
    let ly: Vec<f64> = fluctuation.iter().map(|f| f.ln()).collect();
    let (hurst, _, r_squared) = linear_fit(&lx, &ly);
    Ok(DfaResult {
        scales,
        fluctuation,
        hurst,
        r_squared,
    })
}

fn fluctuation_at(profile: &[f64], scale: usize) -> f64 {
    // x = 0..scale-1 is shared by every window
    let n = scale as f64;
    let mx = (n - 1.0) / 2.0;
    let sxx = n * (n * n - 1.0) / 12.0;

    let n_windows = profile.len() / scale;
    let mut rss = 0.0;
    for w in profile.chunks_exact(scale) {
        let my = w.iter().sum::<f64>() / n;
        let sxy: f64 = w
            .iter()
            .enumerate()
            .map(|(i, y)| (i as f64 - mx) * (y - my))
            .sum();
        let slope = sxy / sxx;
        rss += w
            .iter()
            .enumerate()
            .map(|(i, y)| {
                let r = y - my - slope * (i as f64 - mx);
                r * r
            })
            .sum::<f64>();
    }
    (rss / (n_windows * scale) as f64).sqrt()
}
