use crate::error::AnalysisError;

/// Log returns `R(t) = ln P(t) - ln P(t-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries(Vec<f64>);

impl ReturnSeries {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn abs(&self) -> Vec<f64> {
        self.0.iter().map(|r| r.abs()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub fn log_returns(prices: &[f64]) -> Result<ReturnSeries, AnalysisError> {
    if prices.len() < 2 {
        return Err(AnalysisError::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    if let Some((index, &value)) = prices
        .iter()
        .enumerate()
        .find(|(_, p)| !(p.is_finite() && **p > 0.0))
    {
        return Err(AnalysisError::NonPositivePrice { index, value });
    }
    Ok(ReturnSeries(
        prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect(),
    ))
}
