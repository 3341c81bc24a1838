//! Lognormal parameters from a closing-price series.

use std::io::Read;

use chrono::{Datelike, NaiveDate};
use serde::Deserialize;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EstimateError {
    #[error("need at least 3 prices, got {0}")]
    InsufficientData(usize),
    #[error("nonpositive close {close} on {date}")]
    NonpositivePrice { date: NaiveDate, close: f64 },
    #[error("dates not strictly increasing at {0}")]
    UnorderedDates(NaiveDate),
    #[error("price file: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct PricePoint {
    pub date: NaiveDate,
    pub close: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mu: f64,
    pub sigma: f64,
    /// Number of log returns used.
    pub n_obs: usize,
}

/// Reads a `date,close` CSV with ISO-8601 dates.
pub fn read_prices<R: Read>(reader: R) -> Result<Vec<PricePoint>, EstimateError> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<Result<Vec<PricePoint>, _>>()
        .map_err(|e| EstimateError::Csv(e.to_string()))
}

/// Keeps the last observation of each ISO week. Assumes ordered dates.
pub fn weekly_closes(prices: &[PricePoint]) -> Vec<PricePoint> {
    let mut out: Vec<PricePoint> = Vec::new();
    for p in prices {
        match out.last_mut() {
            Some(last) if last.date.iso_week() == p.date.iso_week() => *last = *p,
            _ => out.push(*p),
        }
    }
    out
}

/// Sample mean and standard deviation (`n - 1` denominator) of the log
/// returns `ln(P_t / P_{t-1})`.
pub fn estimate_lognormal(prices: &[PricePoint]) -> Result<Estimate, EstimateError> {
    if prices.len() < 3 {
        return Err(EstimateError::InsufficientData(prices.len()));
    }
    if let Some(p) = prices.iter().find(|p| !(p.close > 0.0)) {
        return Err(EstimateError::NonpositivePrice {
            date: p.date,
            close: p.close,
        });
    }
    if let Some(w) = prices.windows(2).find(|w| w[1].date <= w[0].date) {
        return Err(EstimateError::UnorderedDates(w[1].date));
    }
    let returns: Vec<f64> = prices.windows(2).map(|w| (w[1].close / w[0].close).ln()).collect();
    let n = returns.len() as f64;
    let mu = returns.iter().sum::<f64>() / n;
    let ss: f64 = returns.iter().map(|x| (x - mu).powi(2)).sum();
    Ok(Estimate {
        mu,
        sigma: (ss / (n - 1.0)).sqrt(),
        n_obs: returns.len(),
    })
}

/// Compound conversion `(1 + annual)^(1/periods) - 1`.
pub fn annualized_rate_to_period(annual_rate: f64, periods_per_year: f64) -> f64 {
    (annual_rate.ln_1p() / periods_per_year).exp_m1()
}
