//! Run configuration: flat `key = value` files layered under command-line
//! flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use ellr_core::verify::CHECK_NAMES;
use ellr_core::{Cx, GridSpec, Params};
use thiserror::Error;

use crate::complex::{parse_complex, parse_range};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "ELLR_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Line {
        path: String,
        line: usize,
        message: String,
    },
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (text or json)")),
        }
    }
}

/// Which checks to schedule.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckSelection {
    All,
    Named(Vec<String>),
}

impl FromStr for CheckSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(CheckSelection::All);
        }
        let names: Vec<String> = s
            .split(',')
            .map(str::trim)
            .filter(|n| !n.is_empty())
            .map(String::from)
            .collect();
        if let Some(bad) = names.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
            return Err(format!("unknown check: {bad}"));
        }
        Ok(CheckSelection::Named(names))
    }
}

/// Every setting a run can take; `None` leaves the default or the value
/// from a lower layer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub q_half: Option<Cx>,
    pub p: Option<Cx>,
    pub truncation_order: Option<usize>,
    pub tolerance: Option<f64>,
    pub singular_guard: Option<f64>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub p_range: Option<(f64, f64)>,
    pub q_half_range: Option<(f64, f64)>,
    pub s_re_range: Option<(f64, f64)>,
    pub s_im_max: Option<f64>,
    pub z_modulus_range: Option<(f64, f64)>,
    pub s_samples: Option<usize>,
    pub checks: Option<CheckSelection>,
    pub alpha_beta_offset: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub timestamp: Option<bool>,
}

fn parse<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("invalid value '{value}': {e}"))
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("invalid boolean '{value}'")),
    }
}

impl RunConfig {
    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "q_half" => self.q_half = Some(parse_complex(value)?),
            "p" => self.p = Some(parse_complex(value)?),
            "truncation_order" => self.truncation_order = Some(parse(value)?),
            "tolerance" => self.tolerance = Some(parse(value)?),
            "singular_guard" => self.singular_guard = Some(parse(value)?),
            "seed" => self.seed = Some(parse(value)?),
            "points" => self.points = Some(parse(value)?),
            "p_range" => self.p_range = Some(parse_range(value)?),
            "q_half_range" => self.q_half_range = Some(parse_range(value)?),
            "s_re_range" => self.s_re_range = Some(parse_range(value)?),
            "s_im_max" => self.s_im_max = Some(parse(value)?),
            "z_modulus_range" => self.z_modulus_range = Some(parse_range(value)?),
            "s_samples" => self.s_samples = Some(parse(value)?),
            "checks" => self.checks = Some(value.parse()?),
            "alpha_beta_offset" => self.alpha_beta_offset = Some(parse(value)?),
            "format" => self.format = Some(value.parse()?),
            "output" => self.output = Some(PathBuf::from(value)),
            "timestamp" => self.timestamp = Some(parse_bool(value)?),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_text(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut config = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError::Line {
                path: origin.to_string(),
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, found '{line}'")))?;
            let key = key.trim().replace('-', "_");
            config
                .set(&key, value.trim())
                .map_err(|m| {
                    if m.starts_with("unknown key") {
                        err(m)
                    } else {
                        err(format!("{key}: {m}"))
                    }
                })?;
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_text(&text, &path.display().to_string())
    }

    /// Fields set in `over` replace those of `self`.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            q_half: over.q_half.or(self.q_half),
            p: over.p.or(self.p),
            truncation_order: over.truncation_order.or(self.truncation_order),
            tolerance: over.tolerance.or(self.tolerance),
            singular_guard: over.singular_guard.or(self.singular_guard),
            seed: over.seed.or(self.seed),
            points: over.points.or(self.points),
            p_range: over.p_range.or(self.p_range),
            q_half_range: over.q_half_range.or(self.q_half_range),
            s_re_range: over.s_re_range.or(self.s_re_range),
            s_im_max: over.s_im_max.or(self.s_im_max),
            z_modulus_range: over.z_modulus_range.or(self.z_modulus_range),
            s_samples: over.s_samples.or(self.s_samples),
            checks: over.checks.or(self.checks),
            alpha_beta_offset: over.alpha_beta_offset.or(self.alpha_beta_offset),
            format: over.format.or(self.format),
            output: over.output.or(self.output),
            timestamp: over.timestamp.or(self.timestamp),
        }
    }

    /// The explicit file, else the one named by [`CONFIG_ENV`], else none.
    pub fn load_base(explicit: Option<&Path>) -> Result<RunConfig, ConfigError> {
        let env = std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        match explicit.map(Path::to_path_buf).or(env) {
            Some(path) => Self::from_file(&path),
            None => Ok(RunConfig::default()),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Text)
    }

    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        let d = GridSpec::default();
        let grid = GridSpec {
            points: self.points.unwrap_or(d.points),
            seed: self.seed.unwrap_or(d.seed),
            p_range: self.p_range.unwrap_or(d.p_range),
            q_half_range: self.q_half_range.unwrap_or(d.q_half_range),
            s_re_range: self.s_re_range.unwrap_or(d.s_re_range),
            s_im_max: self.s_im_max.unwrap_or(d.s_im_max),
            z_modulus_range: self.z_modulus_range.unwrap_or(d.z_modulus_range),
            s_samples: self.s_samples.unwrap_or(d.s_samples),
            checks: match &self.checks {
                Some(CheckSelection::Named(names)) => names.clone(),
                Some(CheckSelection::All) | None => d.checks,
            },
            p: self.p,
            q_half: self.q_half,
            truncation_order: self.truncation_order,
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            singular_guard: self.singular_guard.unwrap_or(d.singular_guard),
            alpha_beta_offset: self.alpha_beta_offset.unwrap_or(d.alpha_beta_offset),
        };
        grid.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(grid)
    }

    /// Parameters for single evaluations; unset values fall back to
    /// `default_q_half` and `default_p`.
    pub fn params(&self, default_q_half: Cx, default_p: Cx) -> Result<Params, ConfigError> {
        let q_half = self.q_half.unwrap_or(default_q_half);
        let p = self.p.unwrap_or(default_p);
        let order = self
            .truncation_order
            .unwrap_or_else(|| Params::auto_truncation_order(q_half, p));
        Params::with_settings(
            q_half,
            p,
            order,
            self.tolerance.unwrap_or(Params::DEFAULT_TOLERANCE),
            self.singular_guard.unwrap_or(Params::DEFAULT_SINGULAR_GUARD),
        )
        .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}
