use hetmarket::analysis::{
    dfa, log_returns, predictability_from, price_stddev, tail_exponent, wealth_summary,
};
use hetmarket::market::rng_from_seed;
use hetmarket::WealthLedger;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Inverse-transform sample with density proportional to x^-gamma on [1, inf).
fn pareto(n: usize, gamma: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / (gamma - 1.0)))
        .collect()
}

fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    (0..n).map(|_| normal.sample(&mut rng)).collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn hill_recovers_pareto_exponent() {
    let fit = tail_exponent(&pareto(100_000, 3.0, 1));
    assert!(fit.reliable);
    assert!((2.85..=3.15).contains(&fit.gamma), "gamma {}", fit.gamma);
    assert_eq!(fit.n_tail, 5000);
}

#[test]
fn hill_is_scale_invariant() {
    let xs = pareto(20_000, 2.5, 2);
    let scaled: Vec<f64> = xs.iter().map(|x| x * 37.5).collect();
    let (a, b) = (tail_exponent(&xs).gamma, tail_exponent(&scaled).gamma);
    assert!((a - b).abs() <= 1e-9 * a, "{a} vs {b}");
}

#[test]
fn dfa_of_white_noise_is_half() {
    let hs: Vec<f64> = (0..20)
        .map(|s| dfa(&white_noise(1 << 14, 100 + s)).unwrap().hurst)
        .collect();
    let h = mean(&hs);
    assert!((h - 0.5).abs() <= 0.05, "mean h {h}");
}

#[test]
fn dfa_of_random_walk_is_three_halves() {
    let hs: Vec<f64> = (0..20)
        .map(|s| {
            let walk: Vec<f64> = white_noise(1 << 14, 200 + s)
                .iter()
                .scan(0.0, |acc, x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect();
            dfa(&walk).unwrap().hurst
        })
        .collect();
    let h = mean(&hs);
    assert!((h - 1.5).abs() <= 0.1, "mean h {h}");
}

#[test]
fn dfa_ignores_constant_shift() {
    let xs = white_noise(4096, 7);
    let shifted: Vec<f64> = xs.iter().map(|x| x + 12.0).collect();
    let (a, b) = (dfa(&xs).unwrap(), dfa(&shifted).unwrap());
    assert!((a.hurst - b.hurst).abs() <= 1e-9);
}

#[test]
fn predictability_ignores_order() {
    let mut rng = rng_from_seed(4);
    let mut obs: Vec<(u32, i64)> = (0..5000)
        .map(|_| (rng.gen_range(0..8), rng.gen_range(-50..=50)))
        .collect();
    let h = predictability_from(obs.clone()).unwrap();
    obs.shuffle(&mut rng);
    assert_eq!(predictability_from(obs).unwrap(), h);
}

#[test]
fn predictability_of_iid_demand_is_small() {
    let n = 1000usize;
    let mut rng = rng_from_seed(8);
    let obs: Vec<(u32, i64)> = (0..200_000)
        .map(|_| {
            let a: i64 = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).sum();
            (rng.gen_range(0..8), a)
        })
        .collect();
    let h = predictability_from(obs).unwrap();
    assert!(h <= 0.01 * n as f64, "H = {h}");
}

#[test]
fn stddev_matches_naive_formula() {
    let mut rng = rng_from_seed(9);
    let prices: Vec<f64> = (0..10_000).map(|_| rng.gen_range(50.0..150.0)).collect();
    let n = prices.len() as f64;
    let (s, s2) = prices.iter().fold((0.0, 0.0), |(a, b), p| (a + p, b + p * p));
    let naive = (s2 / n - (s / n).powi(2)).sqrt();
    let got = price_stddev(&prices).unwrap();
    assert!((got - naive).abs() <= 1e-9 * naive, "{got} vs {naive}");
}

#[test]
fn wealth_matches_naive_mean() {
    let mut rng = rng_from_seed(10);
    let ledgers: Vec<WealthLedger> = (0..500)
        .map(|_| WealthLedger {
            realized: rng.gen_range(-1e4..1e4),
            ..WealthLedger::default()
        })
        .collect();
    let naive = ledgers.iter().map(|l| l.realized).sum::<f64>() / ledgers.len() as f64;
    let w = wealth_summary(&ledgers, &[]);
    assert!((w.pair.unwrap() - naive).abs() <= 1e-9 * naive.abs().max(1.0));
    assert!(w.reference.is_none());
}

#[test]
fn log_returns_of_geometric_path() {
    let prices: Vec<f64> = (0..10).map(|i| 100.0 * 1.01f64.powi(i)).collect();
    let r = log_returns(&prices).unwrap();
    assert_eq!(r.len(), 9);
    assert!(r.values().iter().all(|x| (x - 1.01f64.ln()).abs() < 1e-12));
}
