mod common;

use common::*;
use cpt_cli::solve_once;
use cpt_core::Optimum;

#[test]
fn bull_market_is_unbounded() {
    let s = solve_once(&bull_market()).unwrap();
    assert_eq!(s.solution.optimum, Optimum::PlusInfinity);
    let (_, k2) = s.diagnostics.ratios();
    assert!((k2.unwrap() - 0.3957).abs() <= 0.002, "{k2:?}");
}

#[test]
fn bull_market_buy_ratio() {
    let s = solve_once(&bull_market()).unwrap();
    let (k1, _) = s.diagnostics.ratios();
    assert!((k1.unwrap() - 2.7144).abs() <= 0.002, "K1 = {k1:?}");
}

#[test]
fn oracle_agrees_on_sample_configs() {
    let mut configs = vec![bull_market(), binomial(0.01), binomial(0.3)];
    let mut switch = with_power(ftse(), 0.8, 0.88);
    switch.market.lambda = 0.0005;
    configs.push(switch);
    for mut c in configs {
        c.solve.oracle = true;
        let s = solve_once(&c).unwrap();
        assert!(!s.oracle_failed(), "{s:?}");
    }
}
