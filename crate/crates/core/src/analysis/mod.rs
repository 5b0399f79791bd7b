//! Estimators applied to the measured segment of a run.

mod dfa;
mod report;
mod returns;
mod stats;
mod tail;

pub use dfa::{dfa, dfa_scales, DfaResult, MIN_DFA_LEN};
pub use report::AnalysisReport;
pub use returns::{log_returns, ReturnSeries};
pub use stats::{predictability, predictability_from, price_stddev, wealth_summary, WealthSummary};
pub use tail::{tail_exponent, TailFit, MIN_TAIL_POINTS, TAIL_FRACTION};

/// Ordinary least squares of `ys` on `xs`. Returns `(slope, intercept, r_squared)`.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r_squared)
}
