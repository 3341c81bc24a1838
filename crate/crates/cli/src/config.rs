//! Run configuration: a TOML document with market, preference, portfolio,
//! solve, output and optional sweep sections.

use std::path::{Path, PathBuf};
use std::{fmt, fs};

use cpt_core::oracle::GridSpec;
use cpt_core::{CptPreference, MarketModel, Portfolio, ReturnLaw, UtilityPair, WeightingPair};
use serde::{Deserialize, Serialize};

use crate::estimate::annualized_rate_to_period;
use crate::sweep::SweepSpec;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config:\n{0}")]
    Invalid(Issues),
}

/// Every violated invariant found in one validation pass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Issues(pub Vec<String>);

impl fmt::Display for Issues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub market: MarketSection,
    pub preference: PreferenceSection,
    pub portfolio: PortfolioSection,
    pub solve: SolveSection,
    pub output: OutputSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketSection {
    /// Per-period riskless rate. Give either `r` or `annual_rate` with
    /// `periods_per_year`; neither means `r = 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annual_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods_per_year: Option<f64>,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub returns: ReturnSpec,
}

impl Default for MarketSection {
    fn default() -> Self {
        MarketSection {
            r: Some(0.0),
            annual_rate: None,
            periods_per_year: None,
            lambda: 0.0,
            returns: ReturnSpec::default(),
        }
    }
}

/// Law of the per-period return `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReturnSpec {
    /// `ln(1 + R) ~ N(mu, sigma^2)`.
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    /// Geometric Brownian motion over `horizon` years, turned into a
    /// lognormal law with `mu = (drift - vol^2/2) horizon`.
    Gbm {
        drift: f64,
        vol: f64,
        horizon: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
    StudentT {
        nu: f64,
        loc: f64,
        scale: f64,
    },
    /// Gross return `u` with probability `1 - p`, `d` with probability `p`.
    Binomial {
        u: f64,
        d: f64,
        p: f64,
    },
    Empirical {
        sample: Vec<f64>,
    },
}

impl Default for ReturnSpec {
    fn default() -> Self {
        ReturnSpec::Lognormal { mu: 0.0, sigma: 0.1 }
    }
}

impl ReturnSpec {
    pub fn build(&self) -> cpt_core::Result<ReturnLaw<f64>> {
        match self {
            ReturnSpec::Lognormal { mu, sigma } => ReturnLaw::lognormal(*mu, *sigma),
            ReturnSpec::Gbm { drift, vol, horizon } => {
                if !(*horizon > 0.0) {
                    return Err(cpt_core::Error::InvalidParameter {
                        name: "horizon",
                        reason: "must be positive".into(),
                    });
                }
                ReturnLaw::lognormal((drift - 0.5 * vol * vol) * horizon, vol * horizon.sqrt())
            }
            ReturnSpec::Normal { mu, sigma } => ReturnLaw::normal(*mu, *sigma),
            ReturnSpec::StudentT { nu, loc, scale } => ReturnLaw::student_t(*nu, *loc, *scale),
            ReturnSpec::Binomial { u, d, p } => ReturnLaw::binomial(*u, *d, *p),
            ReturnSpec::Empirical { sample } => ReturnLaw::empirical(sample.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreferenceSection {
    pub utility: UtilitySpec,
    pub weighting: WeightingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilitySpec {
    Power { alpha: f64, beta: f64, k: f64 },
    Exponential { eta_plus: f64, eta_minus: f64, zeta: f64 },
}

impl Default for UtilitySpec {
    fn default() -> Self {
        UtilitySpec::Power {
            alpha: 0.88,
            beta: 0.88,
            k: 2.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightingSpec {
    TverskyKahneman {
        gamma: f64,
        delta: f64,
    },
    Prelec {
        gamma: f64,
        delta_plus: f64,
        delta_minus: f64,
    },
    Identity,
}

impl Default for WeightingSpec {
    fn default() -> Self {
        WeightingSpec::TverskyKahneman {
            gamma: 0.61,
            delta: 0.69,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortfolioSection {
    pub x0: f64,
    pub y0: f64,
}

impl Default for PortfolioSection {
    fn default() -> Self {
        PortfolioSection { x0: 1.0, y0: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Power utility, holding `y0 > 0`, no shorting beyond the holding.
    Continuous,
    /// Exponential utility on a binomial market, `y0 = 0`.
    Binomial,
    /// Power utility with `y0 = 0` and unrestricted shorting.
    ZeroInitial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSection {
    pub mode: Mode,
    pub oracle: bool,
    pub grid: GridOverrides,
}

impl Default for SolveSection {
    fn default() -> Self {
        SolveSection {
            mode: Mode::Continuous,
            oracle: false,
            grid: GridOverrides::default(),
        }
    }
}

/// Oracle grid overrides; the window defaults to ten times `1 + |theta*|`
/// either side of zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_j: Option<f64>,
}

impl GridOverrides {
    pub fn grid_for(&self, centre: f64) -> cpt_core::Result<GridSpec<f64>> {
        let around = GridSpec::around(centre);
        let mut spec = GridSpec::new(self.lo.unwrap_or(around.lo), self.hi.unwrap_or(around.hi))?;
        if let Some(n) = self.points {
            spec.n_points = n;
        }
        if let Some(rounds) = self.refinement_rounds {
            spec.refinement_rounds = rounds;
        }
        spec.tol_j = self.tol_j;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    #[default]
    Summary,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    pub format: Format,
}

/// Model objects built from a validated config.
#[derive(Debug, Clone)]
pub struct Model {
    pub market: MarketModel<f64>,
    pub preference: CptPreference<f64>,
    pub portfolio: Portfolio<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Ok(toml::from_str(&text)?)
    }

    /// The effective config, defaults filled in.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn rate(&self) -> Result<f64, String> {
        let m = &self.market;
        match (m.r, m.annual_rate, m.periods_per_year) {
            (Some(r), None, None) => Ok(r),
            (None, None, None) => Ok(0.0),
            (None, Some(a), Some(n)) => {
                if !(a > -1.0) {
                    Err("annual_rate must exceed -1".into())
                } else if !(n >= 1.0) {
                    Err("periods_per_year must be at least 1".into())
                } else {
                    Ok(annualized_rate_to_period(a, n))
                }
            }
            _ => Err("give either r or both annual_rate and periods_per_year".into()),
        }
    }

    /// Builds the model objects, collecting every violated invariant.
    pub fn model(&self) -> Result<Model, ConfigError> {
        let mut issues = Vec::new();
        let mut note = |section: &str, e: &dyn fmt::Display| issues.push(format!("{section}: {e}"));

        let returns = self.market.returns.build().map_err(|e| note("market.returns", &e)).ok();
        let r = self.rate().map_err(|e| note("market", &e)).ok();
        let market = match (r, returns) {
            (Some(r), Some(law)) => MarketModel::new(r, self.market.lambda, law)
                .map_err(|e| note("market", &e))
                .ok(),
            _ => None,
        };
        if let Some(m) = &market {
            let check = m.check_no_arbitrage();
            if !check.passed() {
                note("market", &format!("no-arbitrage check {check}"));
            }
        }

        let utility = match self.preference.utility {
            UtilitySpec::Power { alpha, beta, k } => UtilityPair::power(alpha, beta, k),
            UtilitySpec::Exponential {
                eta_plus,
                eta_minus,
                zeta,
            } => UtilityPair::exponential(eta_plus, eta_minus, zeta),
        }
        .map_err(|e| note("preference.utility", &e))
        .ok();
        let weighting = match self.preference.weighting {
            WeightingSpec::TverskyKahneman { gamma, delta } => WeightingPair::tversky_kahneman(gamma, delta),
            WeightingSpec::Prelec {
                gamma,
                delta_plus,
                delta_minus,
            } => WeightingPair::prelec(gamma, delta_plus, delta_minus),
            WeightingSpec::Identity => Ok(WeightingPair::Identity),
        }
        .map_err(|e| note("preference.weighting", &e))
        .ok();
        let preference = match (utility, weighting) {
            (Some(u), Some(w)) => CptPreference::new(u, w).map_err(|e| note("preference", &e)).ok(),
            _ => None,
        };

        let PortfolioSection { x0, y0 } = self.portfolio;
        if !x0.is_finite() {
            note("portfolio", &"x0 must be finite");
        }
        if !(y0.is_finite() && y0 >= 0.0) {
            note("portfolio", &"y0 must be finite and nonnegative");
        }

        let power = matches!(self.preference.utility, UtilitySpec::Power { .. });
        let binomial_law = matches!(self.market.returns, ReturnSpec::Binomial { .. });
        match self.solve.mode {
            Mode::Continuous => {
                if !power {
                    note("solve", &"continuous mode needs power utility");
                }
                if !(y0 > 0.0) {
                    note("solve", &"continuous mode needs y0 > 0 (use zero_initial for y0 = 0)");
                }
            }
            Mode::ZeroInitial => {
                if !power {
                    note("solve", &"zero_initial mode needs power utility");
                }
                if y0 != 0.0 {
                    note("solve", &"zero_initial mode needs y0 = 0");
                }
            }
            Mode::Binomial => {
                if !binomial_law {
                    note("solve", &"binomial mode needs a binomial return law");
                }
                match self.preference.utility {
                    UtilitySpec::Exponential {
                        eta_plus, eta_minus, ..
                    } if eta_plus == eta_minus => {}
                    _ => note(
                        "solve",
                        &"binomial mode needs exponential utility with eta_plus = eta_minus",
                    ),
                }
                if y0 != 0.0 {
                    note("solve", &"binomial mode needs y0 = 0");
                }
            }
        }
        if self.solve.oracle {
            if let Err(e) = self.solve.grid.grid_for(0.0) {
                note("solve.grid", &e);
            }
        }
        if let Some(spec) = &self.sweep {
            if let Err(e) = spec.check(self) {
                note("sweep", &e);
            }
        }

        match (market, preference, issues.is_empty()) {
            (Some(market), Some(preference), true) => Ok(Model {
                market,
                preference,
                portfolio: Portfolio::new(x0, y0),
            }),
            _ => Err(ConfigError::Invalid(Issues(issues))),
        }
    }
}
