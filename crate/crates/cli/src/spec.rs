//! Experiment parameter resolution: defaults, an optional `key = value`
//! configuration file, and command-line flags, in rising precedence.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Harness-level failure, split by exit code: usage problems exit 2,
/// runtime problems exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl From<hbplus_core::Error> for CliError {
    fn from(err: hbplus_core::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Raw option bundle shared by every subcommand. `None` means "not given";
/// the configuration file fills gaps, then defaults apply.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonArgs {
    /// Per-key length in bits
    #[arg(long)]
    pub k: Option<usize>,

    /// Rounds per authentication session
    #[arg(long)]
    pub r: Option<u32>,

    /// Noise level, strictly between 0 and 1/2
    #[arg(long)]
    pub eta: Option<f64>,

    /// Authentication queries voted per key bit
    #[arg(long)]
    pub q: Option<u32>,

    /// Monte Carlo trial count
    #[arg(long)]
    pub trials: Option<u64>,

    /// Master seed; fully determines all randomness
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Render probabilities with 4 decimals, matching the reference tables
    #[arg(long)]
    pub paper_match: bool,

    /// Configuration file with `key = value` lines; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Extra axis controls for the `surface` subcommand.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Smallest noise level on the grid
    #[arg(long)]
    pub eta_min: Option<f64>,

    /// Largest noise level on the grid
    #[arg(long)]
    pub eta_max: Option<f64>,

    /// Noise-axis increment
    #[arg(long)]
    pub eta_step: Option<f64>,

    /// Smallest round count on the grid
    #[arg(long)]
    pub r_min: Option<u32>,

    /// Largest round count on the grid
    #[arg(long)]
    pub r_max: Option<u32>,

    /// Round-axis increment
    #[arg(long)]
    pub r_step: Option<u32>,
}

pub const DEFAULT_KEY_LEN: usize = 32;
pub const DEFAULT_ROUNDS: u32 = 40;
pub const DEFAULT_ETA: f64 = 0.125;
pub const DEFAULT_QUERIES: u32 = 19;
pub const DEFAULT_TRIALS: u64 = 100;
pub const DEFAULT_SEED: u64 = 1;

/// Fully resolved experiment parameters.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub key_len: usize,
    pub rounds: u32,
    pub eta: f64,
    pub queries: u32,
    pub trials: u64,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub paper_match: bool,
    /// Whether eta or r were given explicitly (flag or config) rather than
    /// defaulted; `tables` uses this to decide between the preset parameter
    /// sets and a single custom set.
    pub eta_r_explicit: bool,
    /// Same for q.
    pub q_explicit: bool,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
}

/// Reads a `key = value` configuration file. Keys use the long flag names
/// with `-` or `_`; `#` starts a comment.
pub fn load_config(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config {} line {}: expected `key = value`",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(
            key.trim().replace('-', "_").to_ascii_lowercase(),
            value.trim().to_string(),
        );
    }
    Ok(map)
}

impl CommonArgs {
    /// Merges the configuration file into unset options, then applies
    /// defaults and validates ranges.
    pub fn resolve(&self) -> Result<ExperimentSpec, CliError> {
        let mut merged = self.clone();
        if let Some(path) = &self.config {
            let file = load_config(path)?;
            merged.merge_from(&file)?;
        }

        let spec = ExperimentSpec {
            key_len: merged.k.unwrap_or(DEFAULT_KEY_LEN),
            rounds: merged.r.unwrap_or(DEFAULT_ROUNDS),
            eta: merged.eta.unwrap_or(DEFAULT_ETA),
            queries: merged.q.unwrap_or(DEFAULT_QUERIES),
            trials: merged.trials.unwrap_or(DEFAULT_TRIALS),
            seed: merged.seed.unwrap_or(DEFAULT_SEED),
            format: merged.format.unwrap_or(OutputFormat::Csv),
            out: merged.out.clone(),
            paper_match: merged.paper_match,
            eta_r_explicit: merged.eta.is_some() || merged.r.is_some(),
            q_explicit: merged.q.is_some(),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn merge_from(&mut self, file: &HashMap<String, String>) -> Result<(), CliError> {
        if self.k.is_none() {
            if let Some(v) = file.get("k") {
                self.k = Some(parse_value("k", v)?);
            }
        }
        if self.r.is_none() {
            if let Some(v) = file.get("r") {
                self.r = Some(parse_value("r", v)?);
            }
        }
        if self.eta.is_none() {
            if let Some(v) = file.get("eta") {
                self.eta = Some(parse_value("eta", v)?);
            }
        }
        if self.q.is_none() {
            if let Some(v) = file.get("q") {
                self.q = Some(parse_value("q", v)?);
            }
        }
        if self.trials.is_none() {
            if let Some(v) = file.get("trials") {
                self.trials = Some(parse_value("trials", v)?);
            }
        }
        if self.seed.is_none() {
            if let Some(v) = file.get("seed") {
                self.seed = Some(parse_value("seed", v)?);
            }
        }
        if self.format.is_none() {
            if let Some(v) = file.get("format") {
                self.format = Some(
                    v.parse()
                        .map_err(|e: String| CliError::Usage(format!("config key format: {e}")))?,
                );
            }
        }
        if self.out.is_none() {
            if let Some(v) = file.get("out") {
                self.out = Some(PathBuf::from(v.trim()));
            }
        }
        if !self.paper_match {
            if let Some(v) = file.get("paper_match") {
                self.paper_match = parse_value("paper_match", v)?;
            }
        }
        Ok(())
    }
}

impl ExperimentSpec {
    fn validate(&self) -> Result<(), CliError> {
        if self.key_len == 0 {
            return Err(CliError::Usage("k must be at least 1".into()));
        }
        if self.rounds == 0 {
            return Err(CliError::Usage("r must be at least 1".into()));
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return Err(CliError::Usage(format!(
                "eta must lie strictly between 0 and 1/2, got {}",
                self.eta
            )));
        }
        if self.queries == 0 {
            return Err(CliError::Usage("q must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Ties on even query counts resolve to bit 0; odd counts avoid the bias.
    pub fn warn_on_even_queries(&self) {
        if self.queries.is_multiple_of(2) {
            eprintln!(
                "warning: q = {} is even; majority ties resolve to 0, odd q is recommended",
                self.queries
            );
        }
    }
}

/// Resolved surface axes.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub eta_axis: Vec<f64>,
    pub r_axis: Vec<u32>,
}

pub const DEFAULT_ETA_MIN: f64 = 0.025;
pub const DEFAULT_ETA_MAX: f64 = 0.475;
pub const DEFAULT_ETA_STEP: f64 = 0.025;
pub const DEFAULT_R_MIN: u32 = 10;
pub const DEFAULT_R_MAX: u32 = 200;
pub const DEFAULT_R_STEP: u32 = 10;

impl SurfaceArgs {
    pub fn resolve_axes(&self) -> Result<SurfaceSpec, CliError> {
        let mut merged = self.clone();
        if let Some(path) = &self.common.config {
            let file = load_config(path)?;
            macro_rules! fill {
                ($field:ident, $key:literal) => {
                    if merged.$field.is_none() {
                        if let Some(v) = file.get($key) {
                            merged.$field = Some(parse_value($key, v)?);
                        }
                    }
                };
            }
            fill!(eta_min, "eta_min");
            fill!(eta_max, "eta_max");
            fill!(eta_step, "eta_step");
            fill!(r_min, "r_min");
            fill!(r_max, "r_max");
            fill!(r_step, "r_step");
        }

        let eta_min = merged.eta_min.unwrap_or(DEFAULT_ETA_MIN);
        let eta_max = merged.eta_max.unwrap_or(DEFAULT_ETA_MAX);
        let eta_step = merged.eta_step.unwrap_or(DEFAULT_ETA_STEP);
        let r_min = merged.r_min.unwrap_or(DEFAULT_R_MIN);
        let r_max = merged.r_max.unwrap_or(DEFAULT_R_MAX);
        let r_step = merged.r_step.unwrap_or(DEFAULT_R_STEP);

        if !(eta_min > 0.0 && eta_max < 0.5 && eta_min <= eta_max) {
            return Err(CliError::Usage(format!(
                "noise axis must satisfy 0 < eta-min <= eta-max < 1/2, got [{eta_min}, {eta_max}]"
            )));
        }
        if eta_step <= 0.0 {
            return Err(CliError::Usage("eta-step must be positive".into()));
        }
        if r_min == 0 || r_min > r_max {
            return Err(CliError::Usage(format!(
                "round axis must satisfy 1 <= r-min <= r-max, got [{r_min}, {r_max}]"
            )));
        }
        if r_step == 0 {
            return Err(CliError::Usage("r-step must be positive".into()));
        }

        // Index-based generation avoids compounding f64 drift; half-step
        // slack keeps the intended endpoint.
        let mut eta_axis = Vec::new();
        for i in 0u32.. {
            let eta = eta_min + f64::from(i) * eta_step;
            if eta > eta_max + eta_step * 0.5 {
                break;
            }
            eta_axis.push(eta);
        }
        let r_axis: Vec<u32> = (r_min..=r_max).step_by(r_step as usize).collect();
        Ok(SurfaceSpec { eta_axis, r_axis })
    }
}
