//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Unknown
//! and repeated keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::CliError;
use crate::measure::Weights;
use crate::operator::{MarketParams, OptionKind};
use crate::scheme::{SchemeConfig, StepCount, DEFAULT_CFL_SAFETY};

pub const KNOWN_KEYS: &[&str] = &[
    "kind",
    "sigma",
    "r",
    "K",
    "T",
    "L",
    "M",
    "mu1",
    "m",
    "N",
    "cfl_safety",
    "alpha",
    "mu1_list",
    "output_dir",
    "S0",
    "m_list",
    "surface_stride",
];

pub const DEFAULT_LEVEL: u32 = 7;
pub const DEFAULT_M_LIST: [u32; 5] = [4, 5, 6, 7, 8];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub kind: OptionKind,
    pub sigma: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "K")]
    pub strike: Option<f64>,
    #[serde(rename = "T")]
    pub maturity: Option<f64>,
    /// Defaults to 0.
    #[serde(rename = "L")]
    pub lower: f64,
    /// Defaults to `2K`.
    #[serde(rename = "M")]
    pub upper: Option<f64>,
    pub mu1: f64,
    pub m: u32,
    #[serde(rename = "N")]
    pub steps: StepCount,
    pub cfl_safety: f64,
    pub alpha: Option<f64>,
    pub mu1_list: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    /// Spot for the price-bound computation; defaults to `K`.
    #[serde(rename = "S0")]
    pub spot: Option<f64>,
    pub m_list: Vec<u32>,
    /// Keep every n-th time row in `surface.csv`.
    pub surface_stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kind: OptionKind::Call,
            sigma: None,
            r: None,
            strike: None,
            maturity: None,
            lower: 0.0,
            upper: None,
            mu1: 0.5,
            m: DEFAULT_LEVEL,
            steps: StepCount::Auto,
            cfl_safety: DEFAULT_CFL_SAFETY,
            alpha: None,
            mu1_list: None,
            output_dir: None,
            spot: None,
            m_list: DEFAULT_M_LIST.to_vec(),
            surface_stride: 1,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Config(format!("key `{key}`: expected a finite number, got `{value}`")))
}

fn parse_uint<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse::<T>()
        .map_err(|_| CliError::Config(format!("key `{key}`: expected a non-negative integer, got `{value}`")))
}

fn parse_list<T>(key: &str, value: &str, item: impl Fn(&str, &str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    let trimmed = value.trim().trim_start_matches('[').trim_end_matches(']');
    trimmed
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(key, s))
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let mut config = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line_no}: expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            let Some(&known) = KNOWN_KEYS.iter().find(|k| **k == key) else {
                return Err(CliError::Config(format!("line {line_no}: unknown key `{key}`")));
            };
            if let Some(first) = seen.insert(known, line_no) {
                return Err(CliError::Config(format!(
                    "line {line_no}: key `{key}` already set on line {first}"
                )));
            }
            config.set(known, value)?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "kind" => {
                self.kind = value.parse().map_err(|e: crate::Error| CliError::Config(format!("key `kind`: {e}")))?
            }
            "sigma" => self.sigma = Some(parse_f64(key, value)?),
            "r" => self.r = Some(parse_f64(key, value)?),
            "K" => self.strike = Some(parse_f64(key, value)?),
            "T" => self.maturity = Some(parse_f64(key, value)?),
            "L" => self.lower = parse_f64(key, value)?,
            "M" => self.upper = Some(parse_f64(key, value)?),
            "mu1" => self.mu1 = parse_f64(key, value)?,
            "m" => self.m = parse_uint(key, value)?,
            "N" => {
                self.steps = if value.eq_ignore_ascii_case("auto") {
                    StepCount::Auto
                } else {
                    StepCount::Fixed(parse_uint(key, value)?)
                }
            }
            "cfl_safety" => self.cfl_safety = parse_f64(key, value)?,
            "alpha" => self.alpha = Some(parse_f64(key, value)?),
            "mu1_list" => self.mu1_list = Some(parse_list(key, value, parse_f64)?),
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "S0" => self.spot = Some(parse_f64(key, value)?),
            "m_list" => self.m_list = parse_list(key, value, parse_uint)?,
            "surface_stride" => {
                self.surface_stride = parse_uint(key, value)?;
                if self.surface_stride == 0 {
                    return Err(CliError::Config("key `surface_stride` must be at least 1".into()));
                }
            }
            _ => unreachable!("key list and setter out of sync: {key}"),
        }
        Ok(())
    }

    fn required(value: Option<f64>, key: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn market_params(&self) -> Result<MarketParams, CliError> {
        let sigma = Self::required(self.sigma, "sigma")?;
        let rate = Self::required(self.r, "r")?;
        let strike = Self::required(self.strike, "K")?;
        let maturity = Self::required(self.maturity, "T")?;
        let params = MarketParams {
            sigma,
            rate,
            strike,
            maturity,
            lower: self.lower,
            upper: self.upper.unwrap_or(2.0 * strike),
            kind: self.kind,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn weights(&self) -> Result<Weights, CliError> {
        Ok(Weights::new(self.mu1)?)
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig, CliError> {
        let config = SchemeConfig {
            params: self.market_params()?,
            weights: self.weights()?,
            level: self.m,
            steps: self.steps,
            cfl_safety: self.cfl_safety,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn alpha(&self) -> Result<f64, CliError> {
        let alpha = Self::required(self.alpha, "alpha")?;
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CliError::Config(format!("key `alpha` must lie in (0, 1), got {alpha}")));
        }
        Ok(alpha)
    }

    pub fn mu1_list(&self) -> Result<Vec<Weights>, CliError> {
        let list = self
            .mu1_list
            .as_ref()
            .ok_or_else(|| CliError::Config("missing required key `mu1_list`".into()))?;
        if list.is_empty() {
            return Err(CliError::Config("key `mu1_list` is empty".into()));
        }
        list.iter()
            .map(|&mu1| Weights::new(mu1).map_err(|e| CliError::Config(format!("key `mu1_list`: {e}"))))
            .collect()
    }
}
