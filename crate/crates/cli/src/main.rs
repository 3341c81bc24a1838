#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use cpt_cli::config::ConfigError;
use cpt_cli::run::RunError;
use cpt_cli::sweep::SweepResultRow;
use cpt_cli::{
    annualized_rate_to_period, estimate_lognormal, read_prices, solve_once, sweep, weekly_closes, write_csv, Axis,
    Format, Mode, RunConfig, SweepSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "cpt",
    version,
    about = "CPT optimal investment with proportional transaction costs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration; defaults apply to anything left out.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output format on stdout (overrides output.format).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// CSV output path (overrides output.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one configuration and print the case, optimum and diagnostics.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Check the closed form against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Solve over a one-axis grid and emit plot-ready CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Grid as axis=start:stop:count, e.g. lambda=0:0.05:200.
        #[arg(long)]
        sweep: Option<SweepSpec>,
    },
    /// Estimate lognormal return parameters from a date,close CSV.
    Estimate {
        /// Price file with header `date,close` and ISO-8601 dates.
        #[arg(long)]
        prices: PathBuf,
        /// Keep the last close of each ISO week before estimating.
        #[arg(long)]
        weekly: bool,
        /// Annual riskless rate to convert to a per-period rate.
        #[arg(long, requires = "periods")]
        annual_rate: Option<f64>,
        /// Periods per year for the rate conversion.
        #[arg(long)]
        periods: Option<f64>,
    },
    /// Solve with the oracle on; exits nonzero on a mismatch.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Report the no-arbitrage check and loss-set probabilities.
    CheckArb {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the effective configuration with defaults filled in.
    ShowConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load(path: Option<&Path>) -> Result<RunConfig, ConfigError> {
    path.map_or_else(|| Ok(RunConfig::default()), RunConfig::load)
}

/// Failure classes with distinct exit statuses.
enum Failure {
    Invalid(String),
    Mismatch(String),
    Other(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => c.into(),
            other => Failure::Other(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn write_rows(path: Option<&Path>, axis: Axis, mode: Mode, rows: &[SweepResultRow]) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("create {}", p.display()))?;
            write_csv(file, axis, mode, rows)?;
        }
        None => write_csv(io::stdout().lock(), axis, mode, rows)?,
    }
    Ok(())
}

fn solve(common: &Common, force_oracle: bool) -> Result<(), Failure> {
    let mut config = load(common.config.as_deref())?;
    config.solve.oracle |= force_oracle;
    let summary = solve_once(&config)?;
    let format = common.format.unwrap_or(config.output.format);
    let out = common.out.as_ref().or(config.output.csv.as_ref());
    let row = SweepResultRow::from_summary(config.market.lambda, &summary);
    if let Some(p) = out {
        write_rows(Some(p), Axis::Lambda, config.solve.mode, std::slice::from_ref(&row))?;
    }
    match (format, out) {
        (Format::Csv, None) => write_rows(None, Axis::Lambda, config.solve.mode, &[row])?,
        _ => print!("{}", summary.render()),
    }
    if summary.oracle_failed() {
        return Err(Failure::Mismatch("closed form disagrees with the oracle".into()));
    }
    Ok(())
}

fn run_sweep(common: &Common, spec: Option<SweepSpec>) -> Result<(), Failure> {
    let mut config = load(common.config.as_deref())?;
    if spec.is_some() {
        config.sweep = spec;
    }
    let spec = config
        .sweep
        .ok_or_else(|| Failure::Invalid("no sweep axis: pass --sweep or add a [sweep] section".into()))?;
    // validate the base point once so config errors are not repeated per row
    config.model()?;
    let rows = sweep(&config, &spec);
    let format = common.format.unwrap_or(config.output.format);
    let out = common.out.as_ref().or(config.output.csv.as_ref());
    if out.is_some() || format == Format::Csv {
        write_rows(out.map(PathBuf::as_path), spec.axis, config.solve.mode, &rows)?;
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let mismatched = rows.iter().filter(|r| r.oracle.as_deref() == Some("mismatch")).count();
    if out.is_some() || format == Format::Summary {
        let mut cases: Vec<(&str, usize)> = Vec::new();
        for r in rows.iter().filter(|r| r.error.is_none()) {
            match cases.iter_mut().find(|(c, _)| *c == r.case_id) {
                Some((_, n)) => *n += 1,
                None => cases.push((&r.case_id, 1)),
            }
        }
        println!("sweep = \"{spec}\"");
        println!("rows = {}", rows.len());
        println!("failed_rows = {failed}");
        if config.solve.oracle {
            println!("oracle_mismatches = {mismatched}");
        }
        for (case, n) in cases {
            println!("case.\"{case}\" = {n}");
        }
        if let Some(p) = out {
            println!("csv = {:?}", p.display().to_string());
        }
    }
    if mismatched > 0 {
        return Err(Failure::Mismatch(format!("{mismatched} rows disagree with the oracle")));
    }
    Ok(())
}

fn estimate(prices: &Path, weekly: bool, annual_rate: Option<f64>, periods: Option<f64>) -> Result<(), Failure> {
    let file = File::open(prices).with_context(|| format!("open {}", prices.display()))?;
    let mut series = read_prices(file).map_err(|e| Failure::Invalid(e.to_string()))?;
    if weekly {
        series = weekly_closes(&series);
    }
    let e = estimate_lognormal(&series).map_err(|e| Failure::Invalid(e.to_string()))?;
    println!("mu = {:?}", e.mu);
    println!("sigma = {:?}", e.sigma);
    println!("n_obs = {}", e.n_obs);
    if let (Some(a), Some(n)) = (annual_rate, periods) {
        if !(a > -1.0 && n >= 1.0) {
            return Err(Failure::Invalid("need annual rate > -1 and periods >= 1".into()));
        }
        println!("r = {:?}", annualized_rate_to_period(a, n));
    }
    Ok(())
}

fn check_arb(config: Option<&Path>) -> Result<(), Failure> {
    let config = load(config)?;
    let r = config.rate().map_err(Failure::Invalid)?;
    let law = config
        .market
        .returns
        .build()
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let market =
        cpt_core::MarketModel::new(r, config.market.lambda, law).map_err(|e| Failure::Invalid(e.to_string()))?;
    let check = market.check_no_arbitrage();
    let sets = market.loss_set_probabilities();
    println!("no_arbitrage = \"{check}\"");
    println!("p_buy_loss = {:?}", sets.buy);
    println!("p_sell_loss = {:?}", sets.sell);
    println!("p_short_loss = {:?}", sets.short);
    if let cpt_core::ReturnLaw::Binomial { u, d, .. } = *market.returns() {
        println!("lambda_bar = {:?}", cpt_core::binomial::lambda_bar(&u, &d, &r));
    }
    if check.passed() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("no-arbitrage check {check}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve { common, oracle } => solve(common, *oracle),
        Command::Sweep { common, sweep } => run_sweep(common, *sweep),
        Command::Estimate {
            prices,
            weekly,
            annual_rate,
            periods,
        } => estimate(prices, *weekly, *annual_rate, *periods),
        Command::Verify { common } => solve(common, true),
        Command::CheckArb { config } => check_arb(config.as_deref()),
        Command::ShowConfig { config } => load(config.as_deref()).map_err(Failure::from).map(|c| {
            print!("{}", c.to_toml());
        }),
    };
    let _ = io::stdout().flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("oracle mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
