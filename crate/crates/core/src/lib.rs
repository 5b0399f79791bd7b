//! Agent-based stock market populated by two kinds of traders.
//!
//! Pair-pattern traders hold a few (buy pattern, sell pattern) strategies over
//! the last `M` price moves and act on whichever strategy has the best virtual
//! score. Reference-point traders compare the price with a subjective expected
//! price and trade with probability proportional to the relative mispricing;
//! each carries a fixed gene that sets how far that reference may sit from the
//! rolling mean price. The price moves as `P(t) = P(t-1) * exp(alpha * A / N)`
//! where `A` is the net excess demand.
//!
//! The crate is split into:
//!
//! - [`market`]: the tick engine and its domain types,
//! - [`analysis`]: estimators for tail exponents, DFA, volatility, predictability and wealth,
//! - [`sweep`]: replicated parameter sweeps with deterministic seeding and CSV output.

pub mod analysis;
pub mod config;
pub mod error;
pub mod market;
pub mod series;
pub mod sweep;

pub use config::MarketConfig;
pub use error::{AnalysisError, ConfigError, SimError};
pub use market::{
    init_market, run, run_seeded, Action, HistoryPattern, MarketState, PairAgent, RefAgent,
    RunOutput, SimRng, StrategyPair, TickRecord, WealthLedger,
};
