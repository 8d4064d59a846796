//! `key = value` run configuration. Command-line flags override file values,
//! which override built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use tripflow::{MatcherParams, Weighting};

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`", n + 1);
            };
            let key = k.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{}`", n + 1, k.trim());
            }
            values.insert(key, v.trim().to_owned());
        }
        Ok(Self { values })
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn pick<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
            None => Ok(default),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "dx",
    "dt_ms",
    "tau_ms",
    "retention",
    "exclude_center",
    "weighting",
    "bins",
    "threshold",
    "eval_dt",
    "t_ref",
    "render",
];

/// Matcher flags shared by several subcommands.
#[derive(clap::Args, Debug, Default, Clone)]
pub struct MatcherArgs {
    /// Spatial neighborhood radius in pixels [default: 1.4142].
    #[arg(long)]
    pub dx: Option<f64>,
    /// Neighborhood time depth in milliseconds [default: 100].
    #[arg(long = "dt-ms")]
    pub dt_ms: Option<f64>,
    /// Minimum gap between matched events in milliseconds [default: 3].
    #[arg(long = "tau-ms")]
    pub tau_ms: Option<f64>,
    /// Index maps retained per polarity stream [default: 20000].
    #[arg(long)]
    pub retention: Option<usize>,
    /// Exclude the event's own pixel from its neighborhood.
    #[arg(long = "exclude-center")]
    pub exclude_center: bool,
    /// Triplet weighting: gaussian or uniform [default: gaussian].
    #[arg(long)]
    pub weighting: Option<WeightingArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum WeightingArg {
    Gaussian,
    Uniform,
}

impl FromStr for WeightingArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "uniform" => Ok(Self::Uniform),
            _ => Err(format!("expected gaussian or uniform, got `{s}`")),
        }
    }
}

/// How the reference time of the flow warp loss is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TRef {
    /// Midpoint of the batch span.
    Midpoint,
    /// Start of the batch span.
    Start,
    /// Fixed timestamp in microseconds.
    Micros(u64),
}

impl FromStr for TRef {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "midpoint" => Ok(Self::Midpoint),
            "start" => Ok(Self::Start),
            _ => s
                .parse()
                .map(Self::Micros)
                .map_err(|_| format!("expected midpoint, start or microseconds, got `{s}`")),
        }
    }
}

/// Comma-separated list of seconds.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SecondsList(pub Vec<f64>);

impl FromStr for SecondsList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite() && *v > 0.0)
                    .ok_or_else(|| format!("invalid interval `{p}`"))
            })
            .collect::<Result<_, _>>()
            .map(SecondsList)
    }
}

pub fn matcher_params(file: &ConfigFile, args: &MatcherArgs) -> Result<MatcherParams> {
    let d = MatcherParams::default();
    let dx = file.pick("dx", args.dx, d.dx)?;
    let dt_ms = file.pick("dt_ms", args.dt_ms, d.dt_us as f64 / 1e3)?;
    let tau_ms = file.pick("tau_ms", args.tau_ms, d.tau_us as f64 / 1e3)?;
    let retention = file.pick("retention", args.retention, d.retention)?;
    let exclude_center = file.pick("exclude_center", args.exclude_center.then_some(true), false)?;
    let weighting = match file.pick("weighting", args.weighting, WeightingArg::Gaussian)? {
        WeightingArg::Gaussian => Weighting::Gaussian,
        WeightingArg::Uniform => Weighting::Uniform,
    };
    let base = MatcherParams::from_millis(dx, dt_ms, tau_ms, retention)?;
    let params = MatcherParams {
        exclude_center,
        weighting,
        ..base
    };
    params.validate()?;
    Ok(params)
}
