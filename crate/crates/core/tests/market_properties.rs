use cpt_core::market::terminal_wealth;
use cpt_core::{Excess, MarketModel, Portfolio, ReturnLaw};
use proptest::prelude::*;

proptest! {
    #[test]
    fn frictionless_wealth_is_linear(
        x0 in -5.0..5.0f64, y0 in 0.0..5.0f64, r in 0.0..0.1f64,
        theta in -5.0..5.0f64, gross in 0.1..3.0f64,
    ) {
        let w = terminal_wealth(&Portfolio::new(x0, y0), &r, &0.0, &theta, &gross);
        let expected = (1.0 + r) * x0 + gross * y0 + (gross - 1.0 - r) * theta;
        prop_assert!((w - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn doing_nothing_matches_the_reference(
        x0 in -5.0..5.0f64, y0 in 0.0..5.0f64, r in 0.0..0.1f64,
        lambda in 0.0..0.5f64, gross in 0.1..3.0f64,
    ) {
        let m = MarketModel::new(r, lambda, ReturnLaw::binomial(gross + 0.1, gross, 0.5).unwrap()).unwrap();
        let pf = Portfolio::new(x0, y0);
        let d = m.terminal_wealth(&pf, &0.0, &gross) - m.reference_wealth(&pf, &gross);
        prop_assert!(d.abs() <= 1e-14 * (1.0 + x0.abs() + y0 * gross));
    }

    #[test]
    fn excess_transforms_are_ordered(
        r in 0.0..0.1f64, lambda in 0.0001..0.5f64, gross in 0.1..3.0f64,
    ) {
        let m = MarketModel::new(r, lambda, ReturnLaw::empirical(vec![gross]).unwrap()).unwrap();
        let at = |which| {
            let (shift, scale) = m.excess_coefficients(which);
            shift + scale * gross
        };
        prop_assert!(at(Excess::Z1) < at(Excess::Z2));
        prop_assert!(at(Excess::Z2) < at(Excess::Z3));
    }

    #[test]
    fn frictionless_excess_transforms_coincide(r in 0.0..0.1f64, mu in -0.2..0.2f64, sigma in 0.01..0.5f64) {
        let m = MarketModel::new(r, 0.0, ReturnLaw::lognormal(mu, sigma).unwrap()).unwrap();
        let z1 = m.excess_coefficients(Excess::Z1);
        prop_assert_eq!(z1, m.excess_coefficients(Excess::Z2));
        prop_assert_eq!(z1, m.excess_coefficients(Excess::Z3));
    }

    #[test]
    fn no_arbitrage_implies_positive_loss_sets(
        r in 0.0..0.05f64, lambda in 0.0..0.2f64, mu in -0.3..0.3f64, sigma in 0.01..0.5f64,
        u in 1.0..1.6f64, d in 0.5..1.1f64, p in 0.05..0.95f64, binomial in any::<bool>(),
    ) {
        let law = if binomial {
            match ReturnLaw::binomial(u, d, p) { Ok(l) => l, Err(_) => return Ok(()) }
        } else {
            ReturnLaw::lognormal(mu, sigma).unwrap()
        };
        let m = MarketModel::new(r, lambda, law).unwrap();
        if m.check_no_arbitrage().passed() {
            let sets = m.loss_set_probabilities();
            prop_assert!(sets.buy > 0.0);
            prop_assert!(sets.short > 0.0);
            if sets.sell == 0.0 {
                prop_assert_eq!(sets.buy, 1.0);
            }
        }
    }

    #[test]
    fn survival_complements_the_cdf(mu in -0.3..0.3f64, sigma in 0.01..0.5f64, x in -2.0..3.0f64,
                                    shift in -2.0..2.0f64, scale in -3.0..3.0f64) {
        let law = ReturnLaw::lognormal(mu, sigma).unwrap();
        prop_assert!((law.cdf(x) + law.sf(x) - 1.0).abs() < 1e-14);
        let dist = cpt_core::SignedDistribution::affine(&law, shift, scale);
        prop_assert!((dist.cdf(x) + dist.sf(x) - 1.0).abs() < 1e-14);
    }
}
