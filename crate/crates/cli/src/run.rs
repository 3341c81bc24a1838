//! Single solves with diagnostics and an optional oracle check.

use cpt_core::binomial::analyze_binomial;
use cpt_core::continuous::analyze;
use cpt_core::oracle::{verify, Agreement, OracleReport};
use cpt_core::{Optimum, Solution};
use serde::Serialize;

use crate::config::{ConfigError, Mode, Model, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver: {0}")]
    Solver(#[from] cpt_core::Error),
}

/// Intermediate quantities of the case analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Continuous {
        /// `P(Z1 < 0)`.
        p_buy_loss: f64,
        /// `P(Z2 > 0)` with a holding, `P(Z3 > 0)` without.
        p_sell_loss: f64,
        k1: Option<f64>,
        k2: Option<f64>,
        theta1: Option<f64>,
        theta2: Option<f64>,
        buy_case: &'static str,
        sell_case: &'static str,
    },
    Binomial {
        buy_up: f64,
        buy_down: f64,
        sell_up: f64,
        sell_down: f64,
        lambda_bar: f64,
        zeta_bar1: f64,
        zeta_bar2: Option<f64>,
        zeta_under1: f64,
        zeta_under2: Option<f64>,
        theta3: Option<f64>,
        theta4: Option<f64>,
        buy_case: &'static str,
        sell_case: &'static str,
    },
}

impl Diagnostics {
    /// The two interior candidates: `theta1`/`theta2` or `theta3`/`theta4`.
    pub fn candidates(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Diagnostics::Continuous { theta1, theta2, .. } => (theta1, theta2),
            Diagnostics::Binomial { theta3, theta4, .. } => (theta3, theta4),
        }
    }

    pub fn ratios(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            Diagnostics::Continuous { k1, k2, .. } => (k1, k2),
            Diagnostics::Binomial { .. } => (None, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub agreement: &'static str,
    pub argmax_theta: f64,
    pub max_j: f64,
    pub closed_form_j: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl From<&OracleReport<f64>> for OracleSummary {
    fn from(r: &OracleReport<f64>) -> Self {
        let (agreement, gap, reason) = match &r.agreement {
            Agreement::Match => ("match", None, None),
            Agreement::Mismatch { gap, reason, .. } => ("mismatch", Some(*gap), Some(reason.clone())),
        };
        OracleSummary {
            agreement,
            argmax_theta: r.argmax_theta,
            max_j: r.max_j,
            closed_form_j: r.closed_form_j,
            gap,
            reason,
        }
    }
}

/// Everything one solve produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub solution: Solution<f64>,
    pub diagnostics: Diagnostics,
    pub oracle: Option<OracleSummary>,
}

impl RunSummary {
    pub fn oracle_failed(&self) -> bool {
        self.oracle.as_ref().is_some_and(|o| o.agreement != "match")
    }

    /// Plain-text `key = value` report that parses as TOML.
    pub fn render(&self) -> String {
        #[derive(Serialize)]
        struct Head<'a> {
            case_id: &'a str,
            theta_kind: &'a str,
            theta_star: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            theta_star_hi: Option<f64>,
            j_star: f64,
            boundary: bool,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            solution: Head<'a>,
            diagnostics: &'a Diagnostics,
            #[serde(skip_serializing_if = "Option::is_none")]
            oracle: Option<&'a OracleSummary>,
        }
        let (theta_star, theta_star_hi) = theta_columns(&self.solution.optimum);
        let doc = Doc {
            solution: Head {
                case_id: self.solution.case_id,
                theta_kind: self.solution.optimum.kind(),
                theta_star,
                theta_star_hi,
                j_star: self.solution.prospect,
                boundary: self.solution.boundary,
            },
            diagnostics: &self.diagnostics,
            oracle: self.oracle.as_ref(),
        };
        toml::to_string(&doc).expect("summary serializes")
    }
}

/// `theta*` as one number (the lower end of an interval) plus the upper end
/// of an interval.
pub fn theta_columns(optimum: &Optimum<f64>) -> (f64, Option<f64>) {
    match *optimum {
        Optimum::Finite(t) => (t, None),
        Optimum::Interval { lo, hi } => (lo, Some(hi)),
        Optimum::PlusInfinity => (f64::INFINITY, None),
        Optimum::MinusInfinity => (f64::NEG_INFINITY, None),
    }
}

/// Validates the config, solves, and runs the oracle when enabled.
pub fn solve_once(config: &RunConfig) -> Result<RunSummary, RunError> {
    let model = config.model()?;
    solve_model(config, &model)
}

pub(crate) fn solve_model(config: &RunConfig, model: &Model) -> Result<RunSummary, RunError> {
    let Model {
        market,
        preference,
        portfolio,
    } = model;
    let (solution, diagnostics) = match config.solve.mode {
        Mode::Continuous | Mode::ZeroInitial => {
            let a = analyze(portfolio, market, preference)?;
            let sets = market.loss_set_probabilities();
            let diagnostics = Diagnostics::Continuous {
                p_buy_loss: sets.buy,
                p_sell_loss: if portfolio.y0 > 0.0 { sets.sell } else { sets.short },
                k1: a.k1,
                k2: a.k2,
                theta1: a.theta1,
                theta2: a.theta2,
                buy_case: a.long.case_id,
                sell_case: a.short.case_id,
            };
            (a.solution, diagnostics)
        }
        Mode::Binomial => {
            let a = analyze_binomial(portfolio.x0, market, preference)?;
            let (pp, z) = (a.inputs.pseudo, a.inputs.zetas);
            let diagnostics = Diagnostics::Binomial {
                buy_up: pp.buy_up,
                buy_down: pp.buy_down,
                sell_up: pp.sell_up,
                sell_down: pp.sell_down,
                lambda_bar: a.lambda_bar,
                zeta_bar1: z.bar1,
                zeta_bar2: z.bar2,
                zeta_under1: z.under1,
                zeta_under2: z.under2,
                theta3: a.theta3,
                theta4: a.theta4,
                buy_case: a.buy.case_id,
                sell_case: a.sell.case_id,
            };
            (a.solution, diagnostics)
        }
    };
    let oracle = if config.solve.oracle {
        let centre = solution
            .optimum
            .representative()
            .filter(|t| t.is_finite())
            .unwrap_or(0.0);
        let spec = config.solve.grid.grid_for(centre)?;
        Some(OracleSummary::from(&verify(
            &solution, portfolio, market, preference, &spec,
        )?))
    } else {
        None
    };
    Ok(RunSummary {
        solution,
        diagnostics,
        oracle,
    })
}
