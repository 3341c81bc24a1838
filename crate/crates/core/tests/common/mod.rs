//! Random admissible instances shared by the property and acceptance tests.
#![allow(dead_code)]

use cpt_core::{ArbitrageCheck, CptPreference, MarketModel, Portfolio, ReturnLaw, UtilityPair, WeightingPair};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tk_default() -> WeightingPair<f64> {
    WeightingPair::tversky_kahneman(0.61, 0.69).unwrap()
}

pub fn power_pref(alpha: f64, beta: f64, k: f64) -> CptPreference<f64> {
    CptPreference::new(UtilityPair::power(alpha, beta, k).unwrap(), tk_default()).unwrap()
}

pub fn random_weighting(rng: &mut impl Rng) -> WeightingPair<f64> {
    match rng.random_range(0..4) {
        0 => WeightingPair::Identity,
        1 => WeightingPair::prelec(
            rng.random_range(0.3..0.95),
            rng.random_range(0.5..1.5),
            rng.random_range(0.5..1.5),
        )
        .unwrap(),
        _ => WeightingPair::tversky_kahneman(rng.random_range(0.3..1.0), rng.random_range(0.3..1.0)).unwrap(),
    }
}

/// Binomial market passing the no-arbitrage check.
pub fn random_binomial_market(rng: &mut impl Rng) -> MarketModel<f64> {
    loop {
        let r = if rng.random_bool(0.2) {
            0.0
        } else {
            rng.random_range(0.0..0.05)
        };
        let u = 1.0 + rng.random_range(0.01..0.6);
        let d = rng.random_range(0.5..1.05);
        let p = rng.random_range(0.05..0.95);
        let lambda = match rng.random_range(0..4) {
            0 => 0.0,
            1 => rng.random_range(0.0..0.005),
            _ => rng.random_range(0.0..0.15),
        };
        let Ok(law) = ReturnLaw::binomial(u, d, p) else {
            continue;
        };
        let Ok(m) = MarketModel::new(r, lambda, law) else {
            continue;
        };
        if m.check_no_arbitrage() == ArbitrageCheck::Pass {
            return m;
        }
    }
}

pub fn random_exponential_pref(rng: &mut impl Rng) -> CptPreference<f64> {
    let eta = rng.random_range(0.2..3.0);
    let zeta = rng.random_range(1.01..3.0);
    CptPreference::new(UtilityPair::exponential(eta, eta, zeta).unwrap(), random_weighting(rng)).unwrap()
}

/// Lognormal market with a power preference, `alpha < beta`, and a holding.
pub fn random_lognormal_instance(rng: &mut impl Rng) -> (MarketModel<f64>, CptPreference<f64>, Portfolio<f64>) {
    let mu = rng.random_range(-0.05..0.15);
    let sigma = rng.random_range(0.05..0.4);
    let r = rng.random_range(0.0..0.05);
    let lambda = rng.random_range(0.0..0.02);
    let m = MarketModel::new(r, lambda, ReturnLaw::lognormal(mu, sigma).unwrap()).unwrap();
    let alpha = rng.random_range(0.3..0.8);
    let beta = rng.random_range(alpha + 0.1..1.0);
    let k = rng.random_range(1.2..3.0);
    let w = WeightingPair::tversky_kahneman(rng.random_range(0.4..0.95), rng.random_range(0.4..0.95)).unwrap();
    let pref = CptPreference::new(UtilityPair::power(alpha, beta, k).unwrap(), w).unwrap();
    let pf = Portfolio::new(1.0, rng.random_range(0.2..2.0));
    (m, pref, pf)
}

/// `ln(1 + R)` parameters of a GBM over `horizon` years.
pub fn gbm(drift: f64, vol: f64, horizon: f64) -> ReturnLaw<f64> {
    ReturnLaw::lognormal((drift - 0.5 * vol * vol) * horizon, vol * horizon.sqrt()).unwrap()
}
