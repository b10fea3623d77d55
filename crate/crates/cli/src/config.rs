//! Run configuration: defaults, then a `key = value` file, then `RCGEN_SEED`,
//! then command-line flags.

use std::path::Path;
use std::str::FromStr;

use rcgen_core::verify::SuiteConfig;

use crate::CliError;

pub const SEED_ENV: &str = "RCGEN_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(CliError::Parse(format!("unknown format {other:?}; expected json or csv"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub max_nodes: usize,
    pub jet_cap: usize,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let suite = SuiteConfig::default();
        Self {
            tolerance: suite.tolerance,
            max_nodes: suite.max_nodes,
            jet_cap: suite.jet_cap,
            format: Format::Json,
            seed: suite.seed,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layers in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub max_nodes: Option<usize>,
    pub jet_cap: Option<usize>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Parse(format!("invalid value {value:?} for {key}")))
}

impl RunConfig {
    /// Applies a flat `key = value` file; `#` starts a comment.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "tolerance" => self.tolerance = parse_value(key, value)?,
                "max_nodes" => self.max_nodes = parse_value(key, value)?,
                "jet_cap" => self.jet_cap = parse_value(key, value)?,
                "format" => self.format = value.parse()?,
                "seed" => self.seed = parse_value(key, value)?,
                other => return Err(CliError::Parse(format!("config line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(())
    }

    pub fn resolve(config_file: Option<&Path>, env_seed: Option<&str>, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        if let Some(path) = config_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read config {}: {e}", path.display())))?;
            cfg.apply_file_contents(&text)?;
        }
        if let Some(seed) = env_seed {
            cfg.seed = parse_value(SEED_ENV, seed.trim())?;
        }
        cfg.tolerance = flags.tolerance.unwrap_or(cfg.tolerance);
        cfg.max_nodes = flags.max_nodes.unwrap_or(cfg.max_nodes);
        cfg.jet_cap = flags.jet_cap.unwrap_or(cfg.jet_cap);
        cfg.format = flags.format.unwrap_or(cfg.format);
        cfg.seed = flags.seed.unwrap_or(cfg.seed);
        cfg.suite().validate()?;
        Ok(cfg)
    }

    pub fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            tolerance: self.tolerance,
            max_nodes: self.max_nodes,
            jet_cap: self.jet_cap,
            seed: self.seed,
        }
    }
}
