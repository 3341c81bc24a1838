#![allow(dead_code)]

use cpt_cli::config::{ReturnSpec, UtilitySpec};
use cpt_cli::{Mode, RunConfig};

pub fn ftse() -> RunConfig {
    let mut c = RunConfig::default();
    c.market.r = Some(1.3380e-5);
    c.market.returns = ReturnSpec::Lognormal {
        mu: 3.2932e-4,
        sigma: 7.4383e-3,
    };
    c
}

pub fn with_power(mut c: RunConfig, alpha: f64, beta: f64) -> RunConfig {
    c.preference.utility = UtilitySpec::Power { alpha, beta, k: 2.25 };
    c
}

pub fn bull_market() -> RunConfig {
    let mut c = RunConfig::default();
    c.market.r = Some(0.05);
    c.market.lambda = 0.01;
    c.market.returns = ReturnSpec::Gbm {
        drift: 0.15,
        vol: 0.2,
        horizon: 1.0,
    };
    c
}

pub fn binomial(lambda: f64) -> RunConfig {
    let mut c = RunConfig::default();
    c.market.r = Some(0.02);
    c.market.lambda = lambda;
    c.market.returns = ReturnSpec::Binomial {
        u: 1.25,
        d: 0.85,
        p: 0.45,
    };
    c.preference.utility = UtilitySpec::Exponential {
        eta_plus: 1.0,
        eta_minus: 1.0,
        zeta: 2.0,
    };
    c.portfolio.y0 = 0.0;
    c.solve.mode = Mode::Binomial;
    c
}
