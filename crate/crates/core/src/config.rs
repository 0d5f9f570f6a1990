//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # Fig. 5 style sweep
//! experiment = fig5
//! n_sites = 20
//! schedule.strategy = greedy
//! disorder.strengths = 0:0.05:0.5
//! ```
//!
//! `#` starts a comment. Unknown or repeated keys are errors; missing keys
//! take the defaults of [`ExperimentConfig::default`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::chain::ChainSpec;
use crate::disorder::DisorderKind;
use crate::error::{Error, Result};
use crate::valve::ScheduleStrategy;

/// Longest disorder grid accepted, including expanded ranges.
pub const MAX_STRENGTHS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig4,
    Fig5,
    Bose,
    Design,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Bose => "bose",
            Self::Design => "design",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            "bose" => Ok(Self::Bose),
            "design" => Ok(Self::Design),
            other => Err(format!(
                "unknown experiment `{other}` (fig4, fig5, bose, design)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingProfile {
    Uniform,
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_sites: usize,
    pub coupling_profile: CouplingProfile,
    pub strategy: ScheduleStrategy,
    pub max_steps: usize,
    /// Greedy search window per step; `None` means `N/2`.
    pub t_max: Option<f64>,
    pub disorder_model: DisorderKind,
    pub strengths: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub output_path: PathBuf,
    /// Window for the optimal unassisted readout time; `None` means `2N`.
    pub bose_t_max: Option<f64>,
    pub bose_grid: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Fig4,
            n_sites: 20,
            coupling_profile: CouplingProfile::Uniform,
            strategy: ScheduleStrategy::GreedyArrival,
            max_steps: 20,
            t_max: None,
            disorder_model: DisorderKind::UniformCoupling,
            strengths: vec![0.0],
            samples: 100,
            seed: 1,
            output_path: PathBuf::from("results"),
            bose_t_max: None,
            bose_grid: crate::bose::DEFAULT_GRID,
        }
    }
}

impl ExperimentConfig {
    pub fn chain(&self) -> Result<ChainSpec> {
        match &self.coupling_profile {
            CouplingProfile::Uniform => ChainSpec::uniform(self.n_sites),
            CouplingProfile::Explicit(c) => ChainSpec::with_couplings(c.clone()),
        }
    }

    /// Greedy window actually used: one round trip of the fastest mode.
    pub fn schedule_t_max(&self) -> f64 {
        self.t_max.unwrap_or(self.n_sites as f64 / 2.0)
    }

    pub fn bose_window(&self) -> f64 {
        self.bose_t_max
            .unwrap_or_else(|| crate::bose::default_t_max(self.n_sites))
    }

    /// Every setting in parseable form, one key per line, output path
    /// excluded.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            writeln!(out, "{k} = {v}").expect("writing to a String cannot fail");
        };
        put("experiment", self.experiment.name().into());
        put("n_sites", self.n_sites.to_string());
        put(
            "coupling_profile",
            match &self.coupling_profile {
                CouplingProfile::Uniform => "uniform".into(),
                CouplingProfile::Explicit(c) => join(c),
            },
        );
        put("schedule.strategy", self.strategy.to_string());
        put("schedule.max_steps", self.max_steps.to_string());
        put("schedule.t_max", opt(self.t_max));
        put("disorder.model", self.disorder_model.to_string());
        put("disorder.strengths", join(&self.strengths));
        put("samples", self.samples.to_string());
        put("seed", self.seed.to_string());
        put("bose.t_max", opt(self.bose_t_max));
        put("bose.grid", self.bose_grid.to_string());
        out
    }

    /// SHA-256 of [`Self::canonical`], hex encoded.
    pub fn fingerprint(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "auto".into(), |v| format!("{v:?}"))
}

const KEYS: [&str; 13] = [
    "experiment",
    "n_sites",
    "coupling_profile",
    "schedule.strategy",
    "schedule.max_steps",
    "schedule.t_max",
    "disorder.model",
    "disorder.strengths",
    "samples",
    "seed",
    "output_path",
    "bose.t_max",
    "bose.grid",
];

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut seen: HashMap<&str, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |key: &str, reason: String| Error::Parse {
            line: line_no,
            key: key.to_string(),
            reason,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("", "expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let key = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| err(key, "unknown key".into()))?;
        if let Some(first) = seen.insert(key, line_no) {
            return Err(err(key, format!("already set on line {first}")));
        }
        if value.is_empty() {
            return Err(err(key, "missing value".into()));
        }
        apply(&mut cfg, key, value).map_err(|reason| err(key, reason))?;
    }

    if let CouplingProfile::Explicit(c) = &cfg.coupling_profile {
        if c.len() + 1 != cfg.n_sites {
            let line = seen.get("coupling_profile").copied().unwrap_or(0);
            return Err(Error::Parse {
                line,
                key: "coupling_profile".into(),
                reason: format!(
                    "{} couplings given, n_sites = {} needs {}",
                    c.len(),
                    cfg.n_sites,
                    cfg.n_sites - 1
                ),
            });
        }
    }
    Ok(cfg)
}

fn apply(cfg: &mut ExperimentConfig, key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "experiment" => cfg.experiment = value.parse()?,
        "n_sites" => cfg.n_sites = at_least(integer(value)?, 2)?,
        "coupling_profile" => {
            cfg.coupling_profile = if value == "uniform" {
                CouplingProfile::Uniform
            } else {
                let c = real_list(value)?;
                if let Some(bad) = c.iter().find(|&&x| x <= 0.0) {
                    return Err(format!("couplings must be > 0, got {bad}"));
                }
                CouplingProfile::Explicit(c)
            }
        }
        "schedule.strategy" => cfg.strategy = value.parse()?,
        "schedule.max_steps" => cfg.max_steps = at_least(integer(value)?, 1)?,
        "schedule.t_max" => cfg.t_max = auto_positive(value)?,
        "disorder.model" => cfg.disorder_model = value.parse()?,
        "disorder.strengths" => {
            let s = strengths(value)?;
            if let Some(bad) = s.iter().find(|&&x| x < 0.0) {
                return Err(format!("strengths must be >= 0, got {bad}"));
            }
            cfg.strengths = s;
        }
        "samples" => cfg.samples = at_least(integer(value)?, 1)?,
        "seed" => {
            cfg.seed = value
                .parse()
                .map_err(|_| format!("`{value}` is not a u64"))?
        }
        "output_path" => cfg.output_path = PathBuf::from(value),
        "bose.t_max" => cfg.bose_t_max = auto_positive(value)?,
        "bose.grid" => cfg.bose_grid = at_least(integer(value)?, 2)?,
        _ => unreachable!("key list and match arms out of sync"),
    }
    Ok(())
}

fn integer(v: &str) -> std::result::Result<usize, String> {
    v.parse()
        .map_err(|_| format!("`{v}` is not a non-negative integer"))
}

fn at_least(v: usize, min: usize) -> std::result::Result<usize, String> {
    if v < min {
        Err(format!("must be at least {min}, got {v}"))
    } else {
        Ok(v)
    }
}

fn real(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", v.trim()))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{}` is not finite", v.trim()))
    }
}

fn auto_positive(v: &str) -> std::result::Result<Option<f64>, String> {
    if v == "auto" {
        return Ok(None);
    }
    let x = real(v)?;
    if x > 0.0 {
        Ok(Some(x))
    } else {
        Err(format!("must be > 0, got {x}"))
    }
}

fn real_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    let out = v
        .split(',')
        .map(real)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if out.len() > MAX_STRENGTHS {
        return Err(format!("more than {MAX_STRENGTHS} values"));
    }
    Ok(out)
}

/// Comma-separated items, each a number or an inclusive `start:step:stop`
/// range. Range points are rounded to 12 decimals.
fn strengths(v: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in v.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(real(x)?),
            [start, step, stop] => {
                let (start, step, stop) = (real(start)?, real(step)?, real(stop)?);
                if step <= 0.0 || stop < start {
                    return Err(format!(
                        "range `{}` needs step > 0 and stop >= start",
                        item.trim()
                    ));
                }
                let count = ((stop - start) / step + 1e-9).floor();
                if count >= MAX_STRENGTHS as f64 {
                    return Err(format!("range `{}` has too many points", item.trim()));
                }
                for i in 0..=count as usize {
                    let x = start + step * i as f64;
                    out.push((x * 1e12).round() / 1e12);
                }
            }
            _ => {
                return Err(format!(
                    "`{}` is neither a number nor start:step:stop",
                    item.trim()
                ))
            }
        }
        if out.len() > MAX_STRENGTHS {
            return Err(format!("more than {MAX_STRENGTHS} strengths"));
        }
    }
    Ok(out)
}
