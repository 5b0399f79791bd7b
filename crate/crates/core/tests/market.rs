use hetmarket::market::{
    reference_band, rng_from_seed, update_price, Action, HoldingLimits, RefAgent, WealthLedger,
};
use hetmarket::series::write_series;
use hetmarket::{init_market, run_seeded, MarketConfig};
use proptest::prelude::*;

fn config_strategy() -> impl Strategy<Value = MarketConfig> {
    (
        1usize..120,
        0.0f64..=1.0,
        1u32..6,
        1usize..4,
        1usize..15,
        0u32..300,
        prop_oneof![Just(10.0), 0.1f64..20.0],
        (-2i32..=0, 1i32..=2),
        any::<u64>(),
    )
        .prop_map(|(n, rho, m, ns, dt, g, alpha, (kmin, kmax), seed)| MarketConfig {
            n_agents: n,
            ratio_ref: rho,
            memory: m,
            n_strategies: ns,
            delta_t: dt,
            g_max: g,
            alpha,
            k_min: kmin,
            k_max: kmax,
            relax_steps: 0,
            measure_steps: 0,
            seed,
            ..MarketConfig::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Steps a random market and checks every per-tick invariant.
    #[test]
    fn tick_invariants(config in config_strategy()) {
        let mut rng = rng_from_seed(config.seed);
        let mut state = init_market(&config, &mut rng).unwrap();
        let genes: Vec<u32> = state.ref_agents.iter().map(|a| a.gene).collect();
        let n = state.n_agents();
        let limits = state.limits();
        let mut replay: Vec<Vec<f64>> = state
            .pair_agents
            .iter()
            .map(|a| vec![0.0; a.strategies.len()])
            .collect();
        prop_assert_eq!(state.ref_agents.len(), config.n_ref());
        prop_assert_eq!(n, config.n_agents);

        for _ in 0..300 {
            let before = state.clone();
            let rec = state.tick(&mut rng).unwrap();

            // price update identity and positivity
            prop_assert!(rec.price > 0.0 && rec.price.is_finite());
            let lr = (rec.price / before.price).ln();
            let expect = config.alpha * rec.excess_demand as f64 / n as f64;
            prop_assert!((lr - expect).abs() <= 1e-12 * expect.abs().max(1e-300), "{lr} vs {expect}");

            // counting identity
            let counted = i64::from(rec.pair_buys) + i64::from(rec.ref_buys)
                - i64::from(rec.pair_sells) - i64::from(rec.ref_sells);
            prop_assert_eq!(rec.excess_demand, counted);
            prop_assert!(rec.excess_demand.unsigned_abs() as usize <= n);
            prop_assert_eq!(rec.pattern, before.history);

            for (a, b) in state.pair_agents.iter().zip(&before.pair_agents) {
                prop_assert!(limits.contains(a.holdings));
                let delta = a.holdings - b.holdings;
                if delta != 0 {
                    // only a best-scoring strategy matching the pattern can trade
                    let best = b.strategies.iter().map(|s| s.score).fold(f64::NEG_INFINITY, f64::max);
                    let fired = b.strategies.iter().any(|s| {
                        s.score == best
                            && ((delta == 1 && s.buy_pattern == rec.pattern)
                                || (delta == -1 && s.sell_pattern == rec.pattern))
                    });
                    prop_assert!(fired);
                }
            }
            for a in &state.ref_agents {
                prop_assert!(limits.contains(a.holdings));
                let (lo, hi) = reference_band(state.rolling_mean, config.alpha, a.gene, n);
                prop_assert!(lo <= a.ref_point && a.ref_point <= hi);
            }
            for (agent, scores) in state.pair_agents.iter().zip(&mut replay) {
                for (s, acc) in agent.strategies.iter().zip(scores.iter_mut()) {
                    *acc += f64::from(s.signal(rec.pattern).value()) * lr;
                }
            }
        }
        let now: Vec<u32> = state.ref_agents.iter().map(|a| a.gene).collect();
        prop_assert_eq!(now, genes);
        for (agent, scores) in state.pair_agents.iter().zip(&replay) {
            for (s, acc) in agent.strategies.iter().zip(scores) {
                prop_assert!((s.score - acc).abs() <= 1e-9 * acc.abs().max(1.0));
            }
        }
    }

    #[test]
    fn ledgers_are_exact_cash_flow_sums(config in config_strategy()) {
        let mut rng = rng_from_seed(config.seed);
        let mut state = init_market(&config, &mut rng).unwrap();
        let mut flows = vec![0.0; state.pair_agents.len()];
        for _ in 0..200 {
            let before: Vec<i32> = state.pair_agents.iter().map(|a| a.holdings).collect();
            let rec = state.tick(&mut rng).unwrap();
            for ((a, h0), f) in state.pair_agents.iter().zip(before).zip(flows.iter_mut()) {
                *f -= f64::from(a.holdings - h0) * rec.price;
            }
        }
        for (a, f) in state.pair_agents.iter().zip(flows) {
            prop_assert_eq!(a.ledger.realized, f);
            prop_assert_eq!(a.ledger.n_buys as i64 - a.ledger.n_sells as i64, i64::from(a.holdings));
        }
    }

    #[test]
    fn update_price_log_identity(p in 1e-3f64..1e6, a in -1000i64..=1000, alpha in 0.01f64..20.0) {
        let q = update_price(p, a, alpha, 1000);
        prop_assert!(q > 0.0);
        let expect = alpha * a as f64 / 1000.0;
        prop_assert!(((q / p).ln() - expect).abs() <= 1e-12 * expect.abs().max(1e-300));
    }
}

#[test]
fn eq1_identity_over_long_run() {
    let config = MarketConfig {
        ratio_ref: 0.5,
        memory: 3,
        relax_steps: 0,
        measure_steps: 10_000,
        seed: 99,
        ..MarketConfig::default()
    };
    let out = run_seeded(&config).unwrap();
    let mut prev = config.p0;
    for r in &out.records {
        let expect = config.alpha * r.excess_demand as f64 / config.n_agents as f64;
        let got = (r.price / prev).ln();
        assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1e-300), "tick {}", r.tick);
        prev = r.price;
    }
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let config = MarketConfig {
        n_agents: 300,
        ratio_ref: 0.3,
        relax_steps: 500,
        measure_steps: 1500,
        seed: 5,
        ..MarketConfig::default()
    };
    let bytes = |c: &MarketConfig| {
        let mut buf = Vec::new();
        write_series(&run_seeded(c).unwrap().records, &mut buf).unwrap();
        buf
    };
    assert_eq!(bytes(&config), bytes(&config));
    let mut other = config.clone();
    other.seed = 6;
    assert_ne!(bytes(&config), bytes(&other));
}

/// One-sample Kolmogorov-Smirnov statistic against U(lo, hi).
fn ks_uniform(mut xs: Vec<f64>, lo: f64, hi: f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn redraw_is_log_uniform_over_band() {
    let mut rng = rng_from_seed(12);
    let (n, alpha, p_bar) = (1000usize, 10.0, 100.0);
    let mut logs = Vec::new();
    for _ in 0..10_000 {
        let mut a = RefAgent {
            gene: n as u32,
            ref_point: 1e30,
            holdings: 0,
            ledger: WealthLedger::default(),
        };
        assert!(a.maybe_redraw_reference(p_bar, alpha, n, &mut rng));
        logs.push((a.ref_point / p_bar).ln());
    }
    assert!(logs.iter().all(|l| (-10.0 - 1e-9..=10.0 + 1e-9).contains(l)));
    // critical value at the 1% level
    let crit = 1.628 / (logs.len() as f64).sqrt();
    let d = ks_uniform(logs, -10.0, 10.0);
    assert!(d < crit, "KS statistic {d} >= {crit}");
}

#[test]
fn clamped_buy_probability_always_fires() {
    let mut rng = rng_from_seed(3);
    let limits = HoldingLimits { k_min: -1, k_max: 1 };
    let a = RefAgent {
        gene: 0,
        ref_point: 250.0,
        holdings: 0,
        ledger: WealthLedger::default(),
    };
    let buys = (0..10_000)
        .filter(|_| a.decide(100.0, limits, &mut rng) == Action::Buy)
        .count();
    assert_eq!(buys, 10_000);
}

#[test]
fn paper_scale_record_count() {
    // 1e5 relaxation + 1e4 measured ticks on a small population
    let config = MarketConfig {
        n_agents: 10,
        relax_steps: 100_000,
        measure_steps: 10_000,
        ..MarketConfig::default()
    };
    let out = run_seeded(&config).unwrap();
    assert_eq!(out.records.len(), 110_000);
    assert_eq!(out.measured_records().len(), 10_000);
}
