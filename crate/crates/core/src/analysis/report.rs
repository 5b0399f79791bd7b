use std::fmt::Write as _;

use super::{dfa, log_returns, predictability, price_stddev, tail_exponent, wealth_summary};
use super::{predictability_from, DfaResult, TailFit};
use crate::market::{HistoryPattern, RunOutput};
use crate::series::SeriesTable;

/// Summary statistics of one measured segment. Estimators that cannot be
/// computed on the given data are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisReport {
    pub n_prices: usize,
    pub sigma_p: Option<f64>,
    pub predictability: Option<f64>,
    pub gamma_abs: Option<TailFit>,
    pub dfa_returns: Option<DfaResult>,
    pub dfa_abs_returns: Option<DfaResult>,
    pub dfa_log_price: Option<DfaResult>,
    pub w_pair: Option<f64>,
    pub w_ref: Option<f64>,
    /// Realized wealth plus open holdings valued at the final price.
    pub w_pair_mtm: Option<f64>,
    pub w_ref_mtm: Option<f64>,
}

impl AnalysisReport {
    /// Price-only statistics: volatility, return tail and DFA.
    pub fn from_prices(prices: &[f64]) -> Self {
        let mut report = AnalysisReport {
            n_prices: prices.len(),
            sigma_p: price_stddev(prices).ok(),
            ..Default::default()
        };
        if let Ok(returns) = log_returns(prices) {
            let abs = returns.abs();
            report.gamma_abs = Some(tail_exponent(&abs));
            report.dfa_returns = dfa(returns.values()).ok();
            report.dfa_abs_returns = dfa(&abs).ok();
            let log_p: Vec<f64> = prices.iter().map(|p| p.ln()).collect();
            report.dfa_log_price = dfa(&log_p).ok();
        }
        report
    }

    /// Full report over the measured segment of a run.
    pub fn from_run(out: &RunOutput) -> Self {
        let measured = out.measured_records();
        let prices: Vec<f64> = measured.iter().map(|r| r.price).collect();
        let mut report = Self::from_prices(&prices);
        report.predictability = predictability(measured).ok();

        let w = wealth_summary(&out.pair_ledgers(), &out.ref_ledgers());
        report.w_pair = w.pair;
        report.w_ref = w.reference;
        let mtm = |ledgers: Vec<f64>| {
            (!ledgers.is_empty()).then(|| ledgers.iter().sum::<f64>() / ledgers.len() as f64)
        };
        let p = out.final_price;
        report.w_pair_mtm = mtm(out
            .pair_agents
            .iter()
            .map(|a| a.ledger.mark_to_market(a.holdings, p))
            .collect());
        report.w_ref_mtm = mtm(out
            .ref_agents
            .iter()
            .map(|a| a.ledger.mark_to_market(a.holdings, p))
            .collect());
        report
    }

    /// Report for an externally supplied series. Predictability is computed
    /// only when the table carries excess demand; the pattern behind each row
    /// is rebuilt from the preceding `memory` price moves, so rows without
    /// that much history are skipped.
    pub fn from_series(table: &SeriesTable, memory: u32) -> Self {
        let mut report = Self::from_prices(&table.measured_prices());
        if let Some(demand) = &table.excess_demand {
            let m = memory as usize;
            let mut pattern = HistoryPattern::from_code(0, memory);
            let mut obs = Vec::new();
            for i in 0..table.price.len() {
                if i > m && table.is_measured(i) {
                    obs.push((pattern.code(), demand[i]));
                }
                if i >= 1 {
                    pattern.push(u8::from(table.price[i] >= table.price[i - 1]));
                }
            }
            if obs.len() >= 1usize << m {
                report.predictability = predictability_from(obs);
            }
        }
        report
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma_abs.as_ref().map(|t| t.gamma).filter(|g| g.is_finite())
    }

    pub fn hurst_returns(&self) -> Option<f64> {
        self.dfa_returns.as_ref().map(|d| d.hurst)
    }

    pub fn hurst_abs(&self) -> Option<f64> {
        self.dfa_abs_returns.as_ref().map(|d| d.hurst)
    }

    /// `key=value` lines. Floats use the shortest representation that
    /// round-trips; absent values are left out.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = vec![("n_prices".into(), self.n_prices.to_string())];
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                kv.push((k.to_string(), v));
            }
        };
        let f = |x: Option<f64>| x.map(|x| x.to_string());
        put("sigma_p", f(self.sigma_p));
        put("predictability", f(self.predictability));
        if let Some(t) = &self.gamma_abs {
            put("gamma_abs", Some(t.gamma.to_string()));
            put("gamma_abs_reliable", Some(t.reliable.to_string()));
            put("gamma_abs_n_tail", Some(t.n_tail.to_string()));
            put("gamma_abs_xmin", Some(t.fit_range.0.to_string()));
            put("gamma_abs_xmax", Some(t.fit_range.1.to_string()));
            put("gamma_abs_regression", f(t.gamma_regression));
            put("gamma_abs_regression_r2", f(t.r_squared));
        }
        for (name, d) in [
            ("hurst_returns", &self.dfa_returns),
            ("hurst_abs", &self.dfa_abs_returns),
            ("hurst_log_price", &self.dfa_log_price),
        ] {
            if let Some(d) = d {
                put(name, Some(d.hurst.to_string()));
                put(&format!("{name}_r2"), Some(d.r_squared.to_string()));
            }
        }
        put("w_pair", f(self.w_pair));
        put("w_ref", f(self.w_ref));
        put("w_pair_mtm", f(self.w_pair_mtm));
        put("w_ref_mtm", f(self.w_ref_mtm));
        kv
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.to_key_values() {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}
