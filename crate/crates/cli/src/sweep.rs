//! One-axis parameter sweeps and their CSV encoding.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Mode, RunConfig, UtilitySpec};
use crate::run::{solve_once, theta_columns, RunSummary};

/// First line of every sweep CSV; bump when the columns change.
pub const CSV_VERSION: &str = "# cpt-sweep v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Lambda,
    Alpha,
    Beta,
    Eta,
    Zeta,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Lambda => "lambda",
            Axis::Alpha => "alpha",
            Axis::Beta => "beta",
            Axis::Eta => "eta",
            Axis::Zeta => "zeta",
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Axis::Lambda, Axis::Alpha, Axis::Beta, Axis::Eta, Axis::Zeta]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown sweep axis `{s}` (lambda, alpha, beta, eta, zeta)"))
    }
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for SweepSpec {
    type Err = String;

    /// Parses `axis=start:stop:count`, e.g. `lambda=0:0.05:200`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected axis=start:stop:count, got `{s}`");
        let (axis, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(SweepSpec {
            axis: axis.trim().parse()?,
            start: start.trim().parse().map_err(|_| bad())?,
            stop: stop.trim().parse().map_err(|_| bad())?,
            count: count.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}:{}:{}", self.axis.name(), self.start, self.stop, self.count)
    }
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i + 1 == n {
                            self.stop
                        } else {
                            self.start + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }

    /// The axis fits the configured utility and the range is usable.
    pub fn check(&self, config: &RunConfig) -> Result<(), String> {
        if self.count == 0 {
            return Err("count must be at least 1".into());
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err("start and stop must be finite".into());
        }
        let power = matches!(config.preference.utility, UtilitySpec::Power { .. });
        match self.axis {
            Axis::Alpha | Axis::Beta if !power => Err(format!("axis {} needs power utility", self.axis.name())),
            Axis::Eta | Axis::Zeta if power => Err(format!("axis {} needs exponential utility", self.axis.name())),
            _ => Ok(()),
        }
    }

    /// The config with the swept parameter set to `value`.
    pub fn apply(&self, config: &RunConfig, value: f64) -> RunConfig {
        let mut c = config.clone();
        c.sweep = None;
        match (self.axis, &mut c.preference.utility) {
            (Axis::Lambda, _) => c.market.lambda = value,
            (Axis::Alpha, UtilitySpec::Power { alpha, .. }) => *alpha = value,
            (Axis::Beta, UtilitySpec::Power { beta, .. }) => *beta = value,
            (
                Axis::Eta,
                UtilitySpec::Exponential {
                    eta_plus, eta_minus, ..
                },
            ) => {
                *eta_plus = value;
                *eta_minus = value;
            }
            (Axis::Zeta, UtilitySpec::Exponential { zeta, .. }) => *zeta = value,
            // rejected by `check`
            _ => {}
        }
        c
    }
}

/// One grid point of a sweep. `theta_a`/`theta_b` hold `theta1`/`theta2`
/// in the continuous modes and `theta3`/`theta4` in the binomial mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResultRow {
    pub value: f64,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub theta_a: Option<f64>,
    pub theta_b: Option<f64>,
    pub theta_star: Option<f64>,
    pub theta_star_hi: Option<f64>,
    pub case_id: String,
    pub j_star: Option<f64>,
    pub boundary: bool,
    pub oracle: Option<String>,
    pub error: Option<String>,
}

impl SweepResultRow {
    pub fn from_summary(value: f64, s: &RunSummary) -> Self {
        let (k1, k2) = s.diagnostics.ratios();
        let (theta_a, theta_b) = s.diagnostics.candidates();
        let (theta_star, theta_star_hi) = theta_columns(&s.solution.optimum);
        SweepResultRow {
            value,
            k1,
            k2,
            theta_a,
            theta_b,
            theta_star: Some(theta_star),
            theta_star_hi,
            case_id: s.solution.case_id.to_string(),
            j_star: Some(s.solution.prospect),
            boundary: s.solution.boundary,
            oracle: s.oracle.as_ref().map(|o| o.agreement.to_string()),
            error: None,
        }
    }

    pub fn failed(value: f64, error: String) -> Self {
        SweepResultRow {
            value,
            k1: None,
            k2: None,
            theta_a: None,
            theta_b: None,
            theta_star: None,
            theta_star_hi: None,
            case_id: String::new(),
            j_star: None,
            boundary: false,
            oracle: None,
            error: Some(error),
        }
    }
}

/// Solves every grid point independently; rows come back in grid order and
/// failures are recorded in their row.
pub fn sweep(config: &RunConfig, spec: &SweepSpec) -> Vec<SweepResultRow> {
    spec.values()
        .into_par_iter()
        .map(|v| match solve_once(&spec.apply(config, v)) {
            Ok(s) => SweepResultRow::from_summary(v, &s),
            Err(e) => SweepResultRow::failed(v, e.to_string()),
        })
        .collect()
}

/// Column names for a sweep over `axis` in `mode`.
pub fn header(axis: Axis, mode: Mode) -> Vec<&'static str> {
    let mut h = vec![axis.name()];
    match mode {
        Mode::Binomial => h.extend(["theta3", "theta4"]),
        _ => h.extend(["K1", "K2", "theta1", "theta2"]),
    }
    h.extend([
        "theta_star",
        "theta_star_hi",
        "case_id",
        "J_star",
        "boundary",
        "oracle",
        "error",
    ]);
    h
}

/// Shortest representation that parses back to the same value.
fn number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:?}")
    }
}

fn theta(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else {
        number(x)
    }
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

pub fn write_csv<W: Write>(out: W, axis: Axis, mode: Mode, rows: &[SweepResultRow]) -> csv::Result<()> {
    let mut out = out;
    writeln!(out, "{CSV_VERSION}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(axis, mode))?;
    for r in rows {
        let mut rec = vec![number(r.value)];
        if mode != Mode::Binomial {
            rec.extend([opt(r.k1, number), opt(r.k2, number)]);
        }
        rec.extend([
            opt(r.theta_a, theta),
            opt(r.theta_b, theta),
            opt(r.theta_star, theta),
            opt(r.theta_star_hi, theta),
            r.case_id.clone(),
            opt(r.j_star, number),
            r.boundary.to_string(),
            r.oracle.clone().unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ]);
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("missing version line `{CSV_VERSION}`")]
    Version,
    #[error("unexpected columns {0:?}")]
    Header(Vec<String>),
    #[error("row {row}, column {column}: cannot parse `{text}`")]
    Cell { row: usize, column: String, text: String },
}

/// Parses a sweep CSV written by [`write_csv`], returning the axis name and
/// the rows.
pub fn read_csv<R: Read>(input: R) -> Result<(String, Vec<SweepResultRow>), ReadError> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text).map_err(csv::Error::from)?;
    let body = text.strip_prefix(CSV_VERSION).ok_or(ReadError::Version)?;
    let mut r = csv::Reader::from_reader(body.trim_start_matches(['\r', '\n']).as_bytes());
    let names: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let binomial = names.get(1).map(String::as_str) == Some("theta3");
    let axis = names.first().cloned().unwrap_or_default();
    let expected_len = if binomial { 10 } else { 12 };
    if names.len() != expected_len || axis.parse::<Axis>().is_err() {
        return Err(ReadError::Header(names));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let cell = |j: usize| -> Result<Option<f64>, ReadError> {
            let s = &rec[j];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| ReadError::Cell {
                row: i + 1,
                column: names[j].clone(),
                text: s.to_string(),
            })
        };
        let text = |j: usize| (!rec[j].is_empty()).then(|| rec[j].to_string());
        let (k1, k2, base) = if binomial {
            (None, None, 1)
        } else {
            (cell(1)?, cell(2)?, 3)
        };
        rows.push(SweepResultRow {
            value: cell(0)?.unwrap_or(f64::NAN),
            k1,
            k2,
            theta_a: cell(base)?,
            theta_b: cell(base + 1)?,
            theta_star: cell(base + 2)?,
            theta_star_hi: cell(base + 3)?,
            case_id: rec[base + 4].to_string(),
            j_star: cell(base + 5)?,
            boundary: &rec[base + 6] == "true",
            oracle: text(base + 7),
            error: text(base + 8),
        });
    }
    Ok((axis, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_axis_ranges() {
        let s: SweepSpec = "lambda=0:0.05:200".parse().unwrap();
        assert_eq!(
            s,
            SweepSpec {
                axis: Axis::Lambda,
                start: 0.0,
                stop: 0.05,
                count: 200
            }
        );
        assert_eq!(s.to_string().parse::<SweepSpec>().unwrap(), s);
        assert!("kappa=0:1:3".parse::<SweepSpec>().is_err());
        assert!("lambda=0:1".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn grid_is_inclusive_and_ordered() {
        let v = SweepSpec {
            axis: Axis::Beta,
            start: 0.9,
            stop: 1.0,
            count: 11,
        }
        .values();
        assert_eq!(v.len(), 11);
        assert_eq!((v[0], v[10]), (0.9, 1.0));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 2.5e17, -0.0, f64::MIN_POSITIVE] {
            assert_eq!(number(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(theta(f64::INFINITY), "+inf");
        assert_eq!(number(f64::INFINITY), "inf");
        assert_eq!("+inf".parse::<f64>().unwrap(), f64::INFINITY);
    }
}
