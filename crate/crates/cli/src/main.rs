//! `rcgen`: evaluate the generating operator, extract its series, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 domain error, 3 accuracy
//! error, 4 a verification check failed.

mod config;
mod report;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rcgen_core::genop::{t_coeffs_quadrature, t_eval_quadrature_with, t_series};
use rcgen_core::verify::{run_suite, Suite};
use rcgen_core::Error;

use config::{Format, Overrides, RunConfig, SEED_ENV};
use report::{EvalRecord, Report, SeriesRecord, SeriesSummary};
use input::{parse_complex, FunctionSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("output error: {0}")]
    Output(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Output(_) => 1,
            CliError::Core(e) => match e {
                Error::Domain(_) | Error::Pole(_) => 2,
                Error::Accuracy { .. } | Error::Numeric { .. } => 3,
                _ => 1,
            },
            CliError::ChecksFailed { .. } => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rcgen", version, about = "Generating operator for the Rankin–Cohen brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate T f(z, t) by contour quadrature.
    Eval {
        #[arg(long = "fn", value_name = "SPEC", allow_hyphen_values = true)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Series coefficients c_0..c_L from exact jets and from quadrature.
    Series {
        #[arg(long = "fn", value_name = "SPEC", allow_hyphen_values = true)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Highest coefficient index L.
        #[arg(long = "order", short = 'L')]
        order: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
        suite: String,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Quadrature tolerance.
    #[arg(long = "tol")]
    tolerance: Option<f64>,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    jet_cap: Option<usize>,
    /// json (newline-delimited records) or csv.
    #[arg(long)]
    format: Option<String>,
    /// Flat key = value file with the same keys as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for randomized checks; overrides RCGEN_SEED and the config file.
    #[arg(long)]
    seed: Option<u64>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let flags = Overrides {
            tolerance: self.tolerance,
            max_nodes: self.max_nodes,
            jet_cap: self.jet_cap,
            format: self.format.as_deref().map(str::parse::<Format>).transpose()?,
            seed: self.seed,
        };
        let env_seed = std::env::var(SEED_ENV).ok();
        RunConfig::resolve(self.config.as_deref(), env_seed.as_deref(), &flags)
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Eval { function, z, t, common } => {
            let cfg = common.resolve()?;
            let f = function.parse::<FunctionSpec>()?.build()?;
            let (z, t) = (parse_complex(&z)?, parse_complex(&t)?);
            let opts = cfg.suite().quad();
            let eval = t_eval_quadrature_with(&f, z, t, &opts)?;
            Report::new(cfg.format).eval(out, &EvalRecord::from(eval))
        }
        Command::Series { function, z, order, common } => {
            let cfg = common.resolve()?;
            if order > cfg.jet_cap {
                return Err(Error::Usage(format!("order {order} exceeds the jet cap {}", cfg.jet_cap)).into());
            }
            let f = function.parse::<FunctionSpec>()?.build()?;
            let z = parse_complex(&z)?;
            let jets = t_series(&f, z, order)?;
            let quads = t_coeffs_quadrature(&f, z, order, &cfg.suite().quad())?;
            let records: Vec<SeriesRecord> = jets
                .coeffs
                .iter()
                .zip(&quads)
                .enumerate()
                .map(|(l, (jet, quad))| SeriesRecord::new(l, *jet, quad.value))
                .collect();
            let summary = SeriesSummary::of(&records);
            Report::new(cfg.format).series(out, &records, &summary)
        }
        Command::Verify { suite, common } => {
            let cfg = common.resolve()?;
            let checks = run_suite(suite.parse()?, &cfg.suite())?;
            Report::new(cfg.format).checks(out, &checks)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                for c in checks.iter().filter(|c| !c.passed) {
                    eprintln!("check {} failed: residual {:e} > {:e} ({})", c.name, c.residual, c.tolerance, c.detail);
                }
                return Err(CliError::ChecksFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("rcgen: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
