//! Power-law tail fitting for `P(|R|) ~ |R|^-gamma`.

use super::linear_fit;

/// Fraction of the largest order statistics used by the Hill estimator.
pub const TAIL_FRACTION: f64 = 0.05;
/// Fewer tail points than this and the fit is flagged unreliable.
pub const MIN_TAIL_POINTS: usize = 50;
const REGRESSION_BINS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// Density exponent `gamma = 1 + 1 / mean(ln(x / xmin))` over the tail. NaN when undefined.
    pub gamma: f64,
    /// Threshold order statistic and the sample maximum.
    pub fit_range: (f64, f64),
    pub n_tail: usize,
    /// Positive samples the fit was drawn from.
    pub n_used: usize,
    pub reliable: bool,
    /// Exponent from a least-squares line through the log-binned tail density.
    pub gamma_regression: Option<f64>,
    pub r_squared: Option<f64>,
}

/// Hill estimate over the top [`TAIL_FRACTION`] of the positive samples.
///
/// Zeros carry no tail information and are dropped before ranking.
pub fn tail_exponent(abs_values: &[f64]) -> TailFit {
    let mut xs: Vec<f64> = abs_values
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > 0.0)
        .collect();
    let n_used = xs.len();
    xs.sort_by(|a, b| b.total_cmp(a));

    let k = ((n_used as f64 * TAIL_FRACTION).round() as usize).max(1);
    if n_used < 2 || k >= n_used {
        return TailFit {
            gamma: f64::NAN,
            fit_range: (f64::NAN, f64::NAN),
            n_tail: 0,
            n_used,
            reliable: false,
            gamma_regression: None,
            r_squared: None,
        };
    }

    let xmin = xs[k];
    let xmax = xs[0];
    let log_sum: f64 = xs[..k].iter().map(|x| (x / xmin).ln()).sum();
    let gamma = if log_sum > 0.0 {
        1.0 + k as f64 / log_sum
    } else {
        f64::NAN
    };
    let regression = log_binned_slope(&xs[..k], xmin, xmax, n_used);

    TailFit {
        gamma,
        fit_range: (xmin, xmax),
        n_tail: k,
        n_used,
        reliable: k >= MIN_TAIL_POINTS && gamma.is_finite(),
        gamma_regression: regression.map(|(g, _)| g),
        r_squared: regression.map(|(_, r2)| r2),
    }
}

/// Slope of log density against log bin centre over logarithmic bins
/// spanning `[xmin, xmax]`.
fn log_binned_slope(tail: &[f64], xmin: f64, xmax: f64, n_total: usize) -> Option<(f64, f64)> {
    if !(xmax > xmin) {
        return None;
    }
    let (lmin, lmax) = (xmin.ln(), xmax.ln());
    let step = (lmax - lmin) / REGRESSION_BINS as f64;
    let mut counts = [0usize; REGRESSION_BINS];
    for &x in tail {
        let b = (((x.ln() - lmin) / step) as usize).min(REGRESSION_BINS - 1);
        counts[b] += 1;
    }
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for (b, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let lo = (lmin + step * b as f64).exp();
        let hi = (lmin + step * (b + 1) as f64).exp();
        lx.push(0.5 * ((lo.ln()) + hi.ln()));
        ly.push((c as f64 / (n_total as f64 * (hi - lo))).ln());
    }
    if lx.len() < 3 {
        return None;
    }
    let (slope, _, r2) = linear_fit(&lx, &ly);
    Some((-slope, r2))
}
