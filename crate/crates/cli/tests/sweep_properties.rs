mod common;

use common::*;
use cpt_cli::run::RunSummary;
use cpt_cli::{read_csv, solve_once, sweep, write_csv, Axis, SweepResultRow, SweepSpec};

fn grid(axis: Axis, start: f64, stop: f64, count: usize) -> SweepSpec {
    SweepSpec {
        axis,
        start,
        stop,
        count,
    }
}

fn csv_round_trip(spec: &SweepSpec, mode: cpt_cli::Mode, rows: &[SweepResultRow]) -> Vec<SweepResultRow> {
    let mut buf = Vec::new();
    write_csv(&mut buf, spec.axis, mode, rows).unwrap();
    let (axis, back) = read_csv(buf.as_slice()).unwrap();
    assert_eq!(axis, spec.axis.name());
    back
}

fn same_bits(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x.to_bits() == y.to_bits(),
        (None, None) => true,
        _ => false,
    }
}

fn assert_rows_equal(a: &[SweepResultRow], b: &[SweepResultRow]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.value.to_bits(), y.value.to_bits());
        for (p, q) in [
            (x.k1, y.k1),
            (x.k2, y.k2),
            (x.theta_a, y.theta_a),
            (x.theta_b, y.theta_b),
            (x.theta_star, y.theta_star),
            (x.theta_star_hi, y.theta_star_hi),
            (x.j_star, y.j_star),
        ] {
            assert!(same_bits(p, q), "{x:?} vs {y:?}");
        }
        assert_eq!(
            (&x.case_id, x.boundary, &x.oracle, &x.error),
            (&y.case_id, y.boundary, &y.oracle, &y.error)
        );
    }
}

#[test]
fn rows_equal_independent_solves() {
    let cases = [
        (ftse(), grid(Axis::Lambda, 0.0, 0.05, 9)),
        (with_power(ftse(), 0.8, 0.88), grid(Axis::Lambda, 0.0, 0.0015, 7)),
        (bull_market(), grid(Axis::Beta, 0.88, 1.0, 5)),
        (binomial(0.01), grid(Axis::Eta, 0.5, 3.0, 6)),
        (binomial(0.01), grid(Axis::Zeta, 1.1, 4.0, 6)),
        (binomial(0.01), grid(Axis::Lambda, 0.0, 0.3, 7)),
    ];
    for (config, spec) in cases {
        let rows = sweep(&config, &spec);
        let direct: Vec<SweepResultRow> = spec
            .values()
            .into_iter()
            .map(|v| {
                let s: RunSummary = solve_once(&spec.apply(&config, v)).unwrap();
                SweepResultRow::from_summary(v, &s)
            })
            .collect();
        assert_rows_equal(&rows, &direct);
        assert!(rows.iter().all(|r| r.error.is_none()), "{rows:?}");
    }
}

#[test]
fn failing_rows_are_recorded_and_the_run_continues() {
    // alpha beyond beta is invalid for part of the grid
    let rows = sweep(&with_power(ftse(), 0.88, 0.9), &grid(Axis::Alpha, 0.8, 1.0, 5));
    assert_eq!(rows.len(), 5);
    assert!(rows[..2].iter().all(|r| r.error.is_none()));
    assert!(rows[3..]
        .iter()
        .all(|r| r.error.as_deref().is_some_and(|e| e.contains("alpha"))));
}

#[test]
fn csv_parses_back_exactly() {
    let mut with_oracle = binomial(0.01);
    with_oracle.solve.oracle = true;
    let cases = [
        (ftse(), grid(Axis::Lambda, 0.001, 0.05, 12)),
        (bull_market(), grid(Axis::Lambda, 0.0, 0.02, 4)),
        (with_oracle, grid(Axis::Zeta, 1.1, 4.0, 8)),
        (with_power(ftse(), 0.88, 0.9), grid(Axis::Alpha, 0.8, 1.0, 5)),
    ];
    for (config, spec) in cases {
        let rows = sweep(&config, &spec);
        let back = csv_round_trip(&spec, config.solve.mode, &rows);
        assert_rows_equal(&rows, &back);
    }
}

#[test]
fn ill_posed_rows_use_inf_tokens() {
    let spec = grid(Axis::Lambda, 0.01, 0.01, 1);
    let rows = sweep(&bull_market(), &spec);
    let mut buf = Vec::new();
    write_csv(&mut buf, spec.axis, cpt_cli::Mode::Continuous, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let line = text.lines().nth(2).unwrap();
    let cells: Vec<&str> = line.split(',').collect();
    assert_eq!(cells[5], "+inf", "{line}");
    assert_eq!(cells[8], "inf", "{line}");
}

#[test]
fn lambda_sweep_on_weekly_index_is_no_trade() {
    let spec = grid(Axis::Lambda, 0.001, 0.05, 50);
    let rows = csv_round_trip(&spec, cpt_cli::Mode::Continuous, &sweep(&ftse(), &spec));
    for r in &rows {
        assert_eq!(r.case_id, "T3.1-1d", "{r:?}");
        assert_eq!(r.theta_star, Some(0.0), "{r:?}");
    }
    let k1: Vec<f64> = rows.iter().map(|r| r.k1.unwrap()).collect();
    let k2: Vec<f64> = rows.iter().map(|r| r.k2.unwrap()).collect();
    assert!(k1.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{k1:?}");
    assert!(k2.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{k2:?}");
}

#[test]
fn optimum_switches_from_buying_to_selling_near_seven_bps() {
    let spec = grid(Axis::Lambda, 0.000025, 0.0015, 60);
    let rows = sweep(&with_power(ftse(), 0.8, 0.88), &spec);
    let long: Vec<bool> = rows.iter().map(|r| r.theta_star == r.theta_a).collect();
    let short: Vec<bool> = rows.iter().map(|r| r.theta_star == r.theta_b).collect();
    assert!(long.iter().zip(&short).all(|(l, s)| l ^ s), "{rows:?}");
    let switches: Vec<usize> = (1..long.len()).filter(|&i| long[i] != long[i - 1]).collect();
    assert_eq!(switches.len(), 1, "{rows:?}");
    let i = switches[0];
    assert!(long[i - 1] && !long[i]);
    let crossing_bp = 0.5 * (rows[i - 1].value + rows[i].value) * 1e4;
    assert!((7.0..=8.0).contains(&crossing_bp), "crossing at {crossing_bp} bp");
}

#[test]
fn beta_sweep_moves_candidates_apart() {
    let mut config = ftse();
    config.market.lambda = 0.01;
    let spec = grid(Axis::Beta, 0.88 + 0.12 / 26.0, 0.88 + 0.12 * 25.0 / 26.0, 25);
    let rows = sweep(&config, &spec);
    let t1: Vec<f64> = rows.iter().map(|r| r.theta_a.unwrap()).collect();
    let t2: Vec<f64> = rows.iter().map(|r| r.theta_b.unwrap()).collect();
    assert!(t1.windows(2).all(|w| w[1] >= w[0]), "{t1:?}");
    assert!(t2.windows(2).all(|w| w[1] <= w[0]), "{t2:?}");
    assert!(rows.iter().all(|r| r.theta_star == r.theta_b), "{rows:?}");
}

#[test]
fn binomial_above_the_threshold_does_not_trade() {
    // lambda-bar = 1 - max(1.02 / 1.25, 0.85 / 1.02)
    let bar = 1.0 - f64::max(1.02 / 1.25, 0.85 / 1.02);
    let rows = sweep(&binomial(0.0), &grid(Axis::Lambda, bar, 0.5, 10));
    assert!(rows.iter().all(|r| r.theta_star == Some(0.0)), "{rows:?}");
}
