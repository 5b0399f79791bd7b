//! Market state and the tick engine.

mod agent;
mod pattern;

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use agent::{
    draw_reference, reference_band, settle, Action, HoldingLimits, PairAgent, RefAgent,
    StrategyPair, WealthLedger,
};
pub use pattern::{encode_change, HistoryPattern};

use crate::config::MarketConfig;
use crate::error::SimError;

/// Random stream used by every run.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p_prev * exp(alpha * excess_demand / n)`.
pub fn update_price(p_prev: f64, excess_demand: i64, alpha: f64, n: usize) -> f64 {
    if excess_demand == 0 {
        return p_prev;
    }
    p_prev * (alpha * excess_demand as f64 / n as f64).exp()
}

/// Observables of one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickRecord {
    pub tick: u64,
    /// Price after this tick's update, `P(t)`.
    pub price: f64,
    /// Net excess demand `A`.
    pub excess_demand: i64,
    /// Pattern the pair traders acted on.
    pub pattern: HistoryPattern,
    pub pair_buys: u32,
    pub pair_sells: u32,
    pub ref_buys: u32,
    pub ref_sells: u32,
    /// False during the relaxation segment.
    pub measured: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketState {
    pub config: MarketConfig,
    pub price: f64,
    /// The last `min(t, delta_t)` prices, oldest first. Holds only `p0` before the first tick.
    pub price_history: VecDeque<f64>,
    pub rolling_mean: f64,
    pub history: HistoryPattern,
    pub pair_agents: Vec<PairAgent>,
    pub ref_agents: Vec<RefAgent>,
    pub tick: u64,
}

/// Builds the initial market for a validated configuration.
pub fn init_market<R: Rng + ?Sized>(config: &MarketConfig, rng: &mut R) -> Result<MarketState, SimError> {
    config.validate()?;
    let n = config.n_agents;
    let p0 = config.p0;

    let pair_agents = (0..config.n_pair())
        .map(|_| {
            PairAgent::new(
                (0..config.n_strategies)
                    .map(|_| StrategyPair::random(config.memory, rng))
                    .collect(),
            )
        })
        .collect();
    let ref_agents = (0..config.n_ref())
        .map(|_| {
            let gene = rng.gen_range(0..=config.g_max);
            RefAgent::new(gene, p0, config.alpha, n, rng)
        })
        .collect();
    let history = HistoryPattern::random(config.memory, rng);

    Ok(MarketState {
        config: config.clone(),
        price: p0,
        price_history: VecDeque::from([p0]),
        rolling_mean: p0,
        history,
        pair_agents,
        ref_agents,
        tick: 0,
    })
}

impl MarketState {
    pub fn limits(&self) -> HoldingLimits {
        HoldingLimits {
            k_min: self.config.k_min,
            k_max: self.config.k_max,
        }
    }

    pub fn n_agents(&self) -> usize {
        self.pair_agents.len() + self.ref_agents.len()
    }

    /// Advances the market by one step.
    ///
    /// Phases, in order: pair traders decide on the current pattern, reference
    /// traders decide on the current price, the price moves with the summed
    /// demand, every trade settles at the new price, virtual scores take the
    /// realized log return, the rolling mean and pattern absorb the new price,
    /// and reference traders whose point fell out of band redraw it.
    pub fn tick<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<TickRecord, SimError> {
        let limits = self.limits();
        let pattern = self.history;
        let p_prev = self.price;

        let pair_actions: Vec<Action> = self
            .pair_agents
            .iter()
            .map(|a| a.decide(pattern, limits, rng))
            .collect();
        let ref_actions: Vec<Action> = self
            .ref_agents
            .iter()
            .map(|a| a.decide(p_prev, limits, rng))
            .collect();

        let (pair_buys, pair_sells) = count(&pair_actions);
        let (ref_buys, ref_sells) = count(&ref_actions);
        let excess_demand =
            i64::from(pair_buys) - i64::from(pair_sells) + i64::from(ref_buys) - i64::from(ref_sells);

        let n = self.n_agents();
        let price = update_price(p_prev, excess_demand, self.config.alpha, n);
        self.tick += 1;
        if !(price.is_finite() && price > 0.0) {
            return Err(SimError::PriceOutOfRange {
                tick: self.tick,
                price,
            });
        }

        for (agent, &action) in self.pair_agents.iter_mut().zip(&pair_actions) {
            settle(&mut agent.holdings, &mut agent.ledger, action, price, limits);
        }
        for (agent, &action) in self.ref_agents.iter_mut().zip(&ref_actions) {
            settle(&mut agent.holdings, &mut agent.ledger, action, price, limits);
        }

        let log_return = (price / p_prev).ln();
        for agent in &mut self.pair_agents {
            agent.update_virtual_scores(pattern, log_return);
        }

        if self.tick == 1 {
            self.price_history.clear();
        }
        if self.price_history.len() == self.config.delta_t {
            self.price_history.pop_front();
        }
        self.price_history.push_back(price);
        self.rolling_mean = self.price_history.iter().sum::<f64>() / self.price_history.len() as f64;
        self.history.push(u8::from(price >= p_prev));
        self.price = price;

        let (p_bar, alpha) = (self.rolling_mean, self.config.alpha);
        for agent in &mut self.ref_agents {
            agent.maybe_redraw_reference(p_bar, alpha, n, rng);
        }

        Ok(TickRecord {
            tick: self.tick,
            price,
            excess_demand,
            pattern,
            pair_buys,
            pair_sells,
            ref_buys,
            ref_sells,
            measured: false,
        })
    }
}

fn count(actions: &[Action]) -> (u32, u32) {
    actions.iter().fold((0, 0), |(b, s), a| match a {
        Action::Buy => (b + 1, s),
        Action::Sell => (b, s + 1),
        Action::Hold => (b, s),
    })
}

/// Everything a single run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config: MarketConfig,
    /// Relaxation ticks first, then measured ticks.
    pub records: Vec<TickRecord>,
    /// Agents at the end of the run. Their ledgers cover the measured segment only.
    pub pair_agents: Vec<PairAgent>,
    pub ref_agents: Vec<RefAgent>,
    pub final_price: f64,
}

impl RunOutput {
    pub fn measured_records(&self) -> &[TickRecord] {
        let start = self.records.partition_point(|r| !r.measured);
        &self.records[start..]
    }

    pub fn measured_prices(&self) -> Vec<f64> {
        self.measured_records().iter().map(|r| r.price).collect()
    }

    pub fn pair_ledgers(&self) -> Vec<WealthLedger> {
        self.pair_agents.iter().map(|a| a.ledger).collect()
    }

    pub fn ref_ledgers(&self) -> Vec<WealthLedger> {
        self.ref_agents.iter().map(|a| a.ledger).collect()
    }
}

/// Runs `relax_steps` relaxation ticks followed by `measure_steps` measured
/// ticks. Ledgers are cleared when measurement starts so that reported wealth
/// covers the measured segment only.
pub fn run<R: Rng + ?Sized>(config: &MarketConfig, rng: &mut R) -> Result<RunOutput, SimError> {
    let mut state = init_market(config, rng)?;
    let mut records = Vec::with_capacity(config.total_steps() as usize);
    for _ in 0..config.relax_steps {
        records.push(state.tick(rng)?);
    }
    for a in &mut state.pair_agents {
        a.ledger = WealthLedger::default();
    }
    for a in &mut state.ref_agents {
        a.ledger = WealthLedger::default();
    }
    for _ in 0..config.measure_steps {
        let mut rec = state.tick(rng)?;
        rec.measured = true;
        records.push(rec);
    }
    Ok(RunOutput {
        config: config.clone(),
        records,
        final_price: state.price,
        pair_agents: state.pair_agents,
        ref_agents: state.ref_agents,
    })
}

/// [`run`] with a stream seeded from `config.seed`.
pub fn run_seeded(config: &MarketConfig) -> Result<RunOutput, SimError> {
    run(config, &mut rng_from_seed(config.seed))
}
