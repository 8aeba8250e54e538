//! Configuration documents for the CLI: one JSON document per scenario,
//! plus grid documents for the sweep and verify subcommands.
//!
//! Distributions are tagged records, e.g. `{"kind": "exponential",
//! "rate": 1.0}`. Discrete atom weights are exact rationals written as
//! strings, `"1/2"`. Validation errors name the offending field path.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::distributions::{Atom, LifetimeDistribution};
use crate::error::{Error, Result};
use crate::oracle::DEFAULT_MAX_ORACLE_OUTCOMES;
use crate::statespace::DEFAULT_MAX_ENUM_BITS;
use crate::systems::{RedundancyMode, Scenario, SystemSpec};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Tagged distribution record as written in config documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Uniform { lo: f64, hi: f64 },
    PointMass { value: f64 },
    Discrete { atoms: Vec<AtomSpec> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub value: f64,
    /// exact rational, e.g. "1/2" or "1"
    pub weight: String,
}

impl DistSpec {
    /// Validate and build the domain distribution; `field` is the config
    /// path used in error messages.
    pub fn build(&self, field: &str) -> Result<LifetimeDistribution> {
        let reword = |e: Error| match e {
            Error::Domain(msg) => Error::validation(field, msg),
            other => other,
        };
        match self {
            DistSpec::Exponential { rate } => {
                LifetimeDistribution::exponential(*rate).map_err(reword)
            }
            DistSpec::Weibull { shape, scale } => {
                LifetimeDistribution::weibull(*shape, *scale).map_err(reword)
            }
            DistSpec::Uniform { lo, hi } => LifetimeDistribution::uniform(*lo, *hi).map_err(reword),
            DistSpec::PointMass { value } => {
                LifetimeDistribution::point_mass(*value).map_err(reword)
            }
            DistSpec::Discrete { atoms } => {
                let mut built = Vec::with_capacity(atoms.len());
                for (i, atom) in atoms.iter().enumerate() {
                    let weight = BigRational::from_str(atom.weight.trim()).map_err(|e| {
                        Error::validation(
                            format!("{field}.atoms[{i}].weight"),
                            format!("not a rational \"num/den\": {e}"),
                        )
                    })?;
                    built.push(Atom { value: atom.value, weight });
                }
                LifetimeDistribution::discrete_finite(built).map_err(reword)
            }
        }
    }

    pub fn from_domain(dist: &LifetimeDistribution) -> DistSpec {
        match dist {
            LifetimeDistribution::Exponential { rate } => DistSpec::Exponential { rate: *rate },
            LifetimeDistribution::Weibull { shape, scale } => {
                DistSpec::Weibull { shape: *shape, scale: *scale }
            }
            LifetimeDistribution::Uniform { lo, hi } => DistSpec::Uniform { lo: *lo, hi: *hi },
            LifetimeDistribution::PointMass { value } => DistSpec::PointMass { value: *value },
            LifetimeDistribution::DiscreteFinite { atoms } => DistSpec::Discrete {
                atoms: atoms
                    .iter()
                    .map(|a| AtomSpec {
                        value: a.value,
                        weight: format!("{}/{}", a.weight.numer(), a.weight.denom()),
                    })
                    .collect(),
            },
        }
    }
}

/// Raw scenario config document, before validation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunConfig {
    n: usize,
    k: usize,
    m: usize,
    mode: String,
    x: Vec<DistSpec>,
    y: Vec<Vec<DistSpec>>,
    trials: Option<u64>,
    seed: Option<u64>,
    tie_tol: Option<f64>,
    alpha: Option<f64>,
    confidence: Option<f64>,
    output_format: Option<String>,
    max_oracle_outcomes: Option<u64>,
    max_enum_bits: Option<u32>,
}

/// Report serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Domain(format!(
                "output format must be \"json\" or \"csv\", got \"{other}\""
            ))),
        }
    }
}

/// Fully validated experiment configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub trials: u64,
    pub seed: u64,
    pub tie_tol: f64,
    pub alpha: f64,
    pub confidence: f64,
    pub output_format: OutputFormat,
    pub max_oracle_outcomes: u64,
    pub max_enum_bits: u32,
}

/// Parse and validate one scenario config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawRunConfig =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;

    if raw.n == 0 {
        return Err(Error::validation("n", "must be positive"));
    }
    if raw.k == 0 || raw.k > raw.n {
        return Err(Error::validation(
            "k",
            format!("must satisfy 1 <= k <= n, got k={}, n={}", raw.k, raw.n),
        ));
    }
    if raw.m == 0 {
        return Err(Error::validation("m", "must be positive"));
    }
    let mode = RedundancyMode::from_str(&raw.mode)
        .map_err(|e| Error::validation("mode", e.to_string()))?;
    if raw.x.len() != raw.n {
        return Err(Error::validation(
            "x",
            format!("expected {} distributions, got {}", raw.n, raw.x.len()),
        ));
    }
    if raw.y.len() != raw.m {
        return Err(Error::validation(
            "y",
            format!("expected {} rows, got {}", raw.m, raw.y.len()),
        ));
    }
    let mut x_dists = Vec::with_capacity(raw.n);
    for (j, spec) in raw.x.iter().enumerate() {
        x_dists.push(spec.build(&format!("x[{j}]"))?);
    }
    let mut y_dists = Vec::with_capacity(raw.m);
    for (i, row) in raw.y.iter().enumerate() {
        if row.len() != raw.n {
            return Err(Error::validation(
                format!("y[{i}]"),
                format!("expected {} entries, got {}", raw.n, row.len()),
            ));
        }
        let mut built = Vec::with_capacity(raw.n);
        for (j, spec) in row.iter().enumerate() {
            built.push(spec.build(&format!("y[{i}][{j}]"))?);
        }
        y_dists.push(built);
    }

    let spec = SystemSpec::new(raw.n, raw.k).expect("validated above");
    let scenario = Scenario::new(spec, mode, x_dists, y_dists).expect("validated above");

    let trials = raw.trials.unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(Error::validation("trials", "must be positive"));
    }
    let tie_tol = raw.tie_tol.unwrap_or(0.0);
    if !tie_tol.is_finite() || tie_tol < 0.0 {
        return Err(Error::validation("tie_tol", "must be finite and >= 0"));
    }
    let alpha = raw.alpha.unwrap_or(DEFAULT_ALPHA);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::validation("alpha", "must be in (0, 1)"));
    }
    let confidence = raw.confidence.unwrap_or(DEFAULT_CONFIDENCE);
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::validation("confidence", "must be in (0, 1)"));
    }
    let output_format = match raw.output_format.as_deref() {
        None => OutputFormat::Json,
        Some(s) => {
            OutputFormat::from_str(s).map_err(|e| Error::validation("output_format", e.to_string()))?
        }
    };

    Ok(RunConfig {
        scenario,
        trials,
        seed: raw.seed.unwrap_or(0),
        tie_tol,
        alpha,
        confidence,
        output_format,
        max_oracle_outcomes: raw.max_oracle_outcomes.unwrap_or(DEFAULT_MAX_ORACLE_OUTCOMES),
        max_enum_bits: raw.max_enum_bits.unwrap_or(DEFAULT_MAX_ENUM_BITS),
    })
}

/// Grid config for the sweep subcommand: a distribution pool cycled over
/// the unit positions of each (n, k, m, mode) cell.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub m_values: Vec<usize>,
    /// omitted or null = all k in 1..=n
    pub k_values: Option<Vec<usize>>,
    pub modes: Vec<String>,
    pub dist_pool: Vec<DistSpec>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub tie_tol: Option<f64>,
    pub alpha: Option<f64>,
    pub confidence: Option<f64>,
}

pub fn parse_sweep_config(text: &str) -> Result<SweepConfig> {
    let cfg: SweepConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if cfg.n_values.is_empty() || cfg.n_values.contains(&0) {
        return Err(Error::validation("n_values", "must be nonempty positive integers"));
    }
    if cfg.m_values.is_empty() || cfg.m_values.contains(&0) {
        return Err(Error::validation("m_values", "must be nonempty positive integers"));
    }
    if let Some(ks) = &cfg.k_values {
        if ks.is_empty() || ks.contains(&0) {
            return Err(Error::validation("k_values", "must be nonempty positive integers"));
        }
    }
    if cfg.modes.is_empty() {
        return Err(Error::validation("modes", "must list at least one mode"));
    }
    for (i, mode) in cfg.modes.iter().enumerate() {
        RedundancyMode::from_str(mode)
            .map_err(|e| Error::validation(format!("modes[{i}]"), e.to_string()))?;
    }
    if cfg.dist_pool.is_empty() {
        return Err(Error::validation("dist_pool", "must list at least one distribution"));
    }
    for (i, spec) in cfg.dist_pool.iter().enumerate() {
        spec.build(&format!("dist_pool[{i}]"))?;
    }
    if cfg.trials == Some(0) {
        return Err(Error::validation("trials", "must be positive"));
    }
    Ok(cfg)
}

/// Build the scenario for one sweep cell: unit (layer i, position j) takes
/// `dist_pool[(i*n + j) % len]`, with layers ordered x, y_1, .., y_m and
/// positions 0-based.
pub fn sweep_cell_scenario(
    cfg: &SweepConfig,
    n: usize,
    k: usize,
    m: usize,
    mode: RedundancyMode,
) -> Result<Scenario> {
    let pool: Vec<LifetimeDistribution> = cfg
        .dist_pool
        .iter()
        .enumerate()
        .map(|(i, s)| s.build(&format!("dist_pool[{i}]")))
        .collect::<Result<_>>()?;
    let pick = |layer: usize, j: usize| pool[(layer * n + j) % pool.len()].clone();
    let x = (0..n).map(|j| pick(0, j)).collect();
    let y = (1..=m).map(|i| (0..n).map(|j| pick(i, j)).collect()).collect();
    Scenario::new(SystemSpec::new(n, k)?, mode, x, y)
}

/// Ranges for the verify subcommand.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub m_max: usize,
    /// "active", "cold", or both; omitted = both
    pub modes: Option<Vec<String>>,
    pub max_enum_bits: Option<u32>,
}

pub fn parse_verify_config(text: &str) -> Result<VerifyConfig> {
    let cfg: VerifyConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if cfg.n_max == 0 {
        return Err(Error::validation("n_max", "must be positive"));
    }
    if cfg.m_max == 0 {
        return Err(Error::validation("m_max", "must be positive"));
    }
    if let Some(modes) = &cfg.modes {
        if modes.is_empty() {
            return Err(Error::validation("modes", "must list at least one mode"));
        }
        for (i, mode) in modes.iter().enumerate() {
            RedundancyMode::from_str(mode)
                .map_err(|e| Error::validation(format!("modes[{i}]"), e.to_string()))?;
        }
    }
    Ok(cfg)
}
