use rand::Rng;

use super::pattern::HistoryPattern;

/// One trader's decision for a tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Action {
    Sell = -1,
    Hold = 0,
    Buy = 1,
}

impl Action {
    pub fn value(self) -> i32 {
        self as i32
    }
}

/// Inclusive bounds on the number of shares a trader may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoldingLimits {
    pub k_min: i32,
    pub k_max: i32,
}

impl HoldingLimits {
    pub fn contains(&self, holdings: i32) -> bool {
        (self.k_min..=self.k_max).contains(&holdings)
    }
}

/// Realized cash flows of one trader: sell proceeds minus buy costs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WealthLedger {
    pub realized: f64,
    pub n_buys: u64,
    pub n_sells: u64,
}

impl WealthLedger {
    /// Value of the ledger if the open position were closed at `price`.
    pub fn mark_to_market(&self, holdings: i32, price: f64) -> f64 {
        self.realized + f64::from(holdings) * price
    }
}

/// Applies a trade at `price` to a position and its ledger.
///
/// Panics if the trade would take holdings outside `limits`; decision rules
/// never produce such a trade.
pub fn settle(
    holdings: &mut i32,
    ledger: &mut WealthLedger,
    action: Action,
    price: f64,
    limits: HoldingLimits,
) {
    match action {
        Action::Hold => {}
        Action::Buy => {
            assert!(*holdings < limits.k_max, "buy at holdings {holdings}");
            *holdings += 1;
            ledger.realized -= price;
            ledger.n_buys += 1;
        }
        Action::Sell => {
            assert!(*holdings > limits.k_min, "sell at holdings {holdings}");
            *holdings -= 1;
            ledger.realized += price;
            ledger.n_sells += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyPair {
    pub buy_pattern: HistoryPattern,
    pub sell_pattern: HistoryPattern,
    pub score: f64,
}

impl StrategyPair {
    pub fn new(buy_pattern: HistoryPattern, sell_pattern: HistoryPattern) -> Self {
        assert_ne!(buy_pattern, sell_pattern, "buy and sell patterns must differ");
        Self {
            buy_pattern,
            sell_pattern,
            score: 0.0,
        }
    }

    /// Samples uniformly among ordered pairs of distinct patterns of length `memory`.
    pub fn random<R: Rng + ?Sized>(memory: u32, rng: &mut R) -> Self {
        let space = HistoryPattern::space(memory);
        let buy = rng.gen_range(0..space);
        let mut sell = rng.gen_range(0..space - 1);
        if sell >= buy {
            sell += 1;
        }
        Self::new(
            HistoryPattern::from_code(buy, memory),
            HistoryPattern::from_code(sell, memory),
        )
    }

    /// What this strategy says to do when facing `pattern`, ignoring holdings.
    pub fn signal(&self, pattern: HistoryPattern) -> Action {
        if pattern == self.buy_pattern {
            Action::Buy
        } else if pattern == self.sell_pattern {
            Action::Sell
        } else {
            Action::Hold
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairAgent {
    pub strategies: Vec<StrategyPair>,
    pub holdings: i32,
    pub ledger: WealthLedger,
}

impl PairAgent {
    pub fn new(strategies: Vec<StrategyPair>) -> Self {
        assert!(!strategies.is_empty());
        Self {
            strategies,
            holdings: 0,
            ledger: WealthLedger::default(),
        }
    }

    /// Index of the best-scoring strategy. Ties are broken uniformly at random;
    /// the stream is only consumed when there is a tie.
    pub fn active_strategy<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let best = self
            .strategies
            .iter()
            .map(|s| s.score)
            .fold(f64::NEG_INFINITY, f64::max);
        let n_best = self.strategies.iter().filter(|s| s.score == best).count();
        let pick = if n_best > 1 { rng.gen_range(0..n_best) } else { 0 };
        self.strategies
            .iter()
            .enumerate()
            .filter(|(_, s)| s.score == best)
            .nth(pick)
            .map(|(i, _)| i)
            .expect("at least one strategy")
    }

    /// Decision on `pattern` with the active strategy. Does not touch holdings.
    pub fn decide<R: Rng + ?Sized>(
        &self,
        pattern: HistoryPattern,
        limits: HoldingLimits,
        rng: &mut R,
    ) -> Action {
        let active = &self.strategies[self.active_strategy(rng)];
        match active.signal(pattern) {
            Action::Buy if self.holdings < limits.k_max => Action::Buy,
            Action::Sell if self.holdings > limits.k_min => Action::Sell,
            _ => Action::Hold,
        }
    }

    /// Credits every strategy with the log return it would have earned by
    /// acting on `prev_pattern`, whether or not it was the active one.
    pub fn update_virtual_scores(&mut self, prev_pattern: HistoryPattern, log_return: f64) {
        for s in &mut self.strategies {
            match s.signal(prev_pattern) {
                Action::Buy => s.score += log_return,
                Action::Sell => s.score -= log_return,
                Action::Hold => {}
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefAgent {
    /// Risk tolerance, fixed for the whole run.
    pub gene: u32,
    /// Expected price the trader anchors on.
    pub ref_point: f64,
    pub holdings: i32,
    pub ledger: WealthLedger,
}

/// Admissible reference points `[p_bar * e^(-alpha g / n), p_bar * e^(alpha g / n)]`.
pub fn reference_band(p_bar: f64, alpha: f64, gene: u32, n: usize) -> (f64, f64) {
    let width = alpha * f64::from(gene) / n as f64;
    (p_bar * (-width).exp(), p_bar * width.exp())
}

/// Draws a reference point with `ln(ref / p_bar)` uniform over the band.
pub fn draw_reference<R: Rng + ?Sized>(
    p_bar: f64,
    alpha: f64,
    gene: u32,
    n: usize,
    rng: &mut R,
) -> f64 {
    let width = alpha * f64::from(gene) / n as f64;
    if width == 0.0 {
        return p_bar;
    }
    let (lo, hi) = reference_band(p_bar, alpha, gene, n);
    let u: f64 = rng.gen_range(-width..=width);
    (p_bar * u.exp()).clamp(lo, hi)
}

impl RefAgent {
    pub fn new<R: Rng + ?Sized>(gene: u32, p_bar: f64, alpha: f64, n: usize, rng: &mut R) -> Self {
        Self {
            gene,
            ref_point: draw_reference(p_bar, alpha, gene, n, rng),
            holdings: 0,
            ledger: WealthLedger::default(),
        }
    }

    /// Buys with probability `min(1, (ref - P) / P)` when the price is below
    /// the reference, sells with probability `min(1, (P - ref) / P)` when above.
    pub fn decide<R: Rng + ?Sized>(&self, price: f64, limits: HoldingLimits, rng: &mut R) -> Action {
        if price < self.ref_point && self.holdings < limits.k_max {
            let p = ((self.ref_point - price) / price).min(1.0);
            if rng.gen_bool(p) {
                return Action::Buy;
            }
        } else if price > self.ref_point && self.holdings > limits.k_min {
            let p = ((price - self.ref_point) / price).min(1.0);
            if rng.gen_bool(p) {
                return Action::Sell;
            }
        }
        Action::Hold
    }

    pub fn in_band(&self, p_bar: f64, alpha: f64, n: usize) -> bool {
        let (lo, hi) = reference_band(p_bar, alpha, self.gene, n);
        (lo..=hi).contains(&self.ref_point)
    }

    /// Keeps the reference point if it is inside the band around `p_bar`,
    /// otherwise draws a new one. Returns whether a redraw happened.
    pub fn maybe_redraw_reference<R: Rng + ?Sized>(
        &mut self,
        p_bar: f64,
        alpha: f64,
        n: usize,
        rng: &mut R,
    ) -> bool {
        if self.in_band(p_bar, alpha, n) {
            return false;
        }
        self.ref_point = draw_reference(p_bar, alpha, self.gene, n, rng);
        true
    }
}
