//! Run configuration: a flat `key = value` document.
//!
//! ```text
//! # comment
//! nu = 0.5
//! dt = 1e-3          # trailing comments are allowed
//! t_end = 1
//! ic = orszag-tang beta=1
//! ```
//!
//! Keys are the [`RunConfig`] field names. `nu`, `dt`, `t_end` and `ic` are
//! required; the rest default as documented on each field.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::Scenario;
use crate::dynamics::{Scheme, StepperConfig};

/// Environment variable overriding `out_dir`.
pub const OUT_DIR_ENV: &str = "MHD_OUT_DIR";

pub const KEYS: [&str; 14] = [
    "dim",
    "n_per_axis",
    "nu",
    "dt",
    "t_end",
    "ic",
    "seed",
    "diagnostics_cadence",
    "snapshot_cadence",
    "epsilon_threshold",
    "out_dir",
    "scheme",
    "cfl_limit",
    "bkm_ceiling",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("`{key}` {constraint}")]
    Validation { key: String, constraint: String },
}

fn invalid(key: &str, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Validation { key: key.to_string(), constraint: constraint.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// 2 or 3 (default 2).
    pub dim: usize,
    /// Power of two ≥ 8 (default 64; at most 64 in 3D).
    pub n_per_axis: usize,
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    pub ic: Scenario,
    /// Default 0.
    pub seed: u64,
    /// Steps between diagnostics records (default 10).
    pub diagnostics_cadence: u64,
    /// Steps between snapshots (default 1000).
    pub snapshot_cadence: u64,
    /// BKM tail threshold ε (default 0.1).
    pub epsilon_threshold: f64,
    /// Default `out`.
    pub out_dir: PathBuf,
    /// Default `if-rk4`.
    pub scheme: Scheme,
    /// Default 0.5.
    pub cfl_limit: f64,
    /// Default 1e6.
    pub bkm_ceiling: f64,
}

impl RunConfig {
    pub fn stepper(&self) -> StepperConfig {
        StepperConfig { nu: self.nu, dt: self.dt, scheme: self.scheme, cfl_limit: self.cfl_limit }
    }
}

/// Unvalidated key–value pairs with the line each came from (0 for
/// overrides).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Parse { line: line_no, message: "expected `key = value`".into() })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::Parse { line: line_no, message: format!("unknown key `{key}`") });
            }
            if value.is_empty() {
                return Err(ConfigError::Parse { line: line_no, message: format!("empty value for `{key}`") });
            }
            if let Some((_, first)) = raw.entries.get(key) {
                return Err(ConfigError::Parse {
                    line: line_no,
                    message: format!("duplicate key `{key}` (first on line {first})"),
                });
            }
            raw.entries.insert(key.to_string(), (value.to_string(), line_no));
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    /// Sets or replaces a key.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(invalid(key, "is not a configuration key"));
        }
        self.entries.insert(key.to_string(), (value.into(), 0));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    /// Applies [`OUT_DIR_ENV`] when it is set and non-empty.
    pub fn apply_env(&mut self) {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                self.entries.insert("out_dir".into(), (dir, 0));
            }
        }
    }

    fn number<T: std::str::FromStr>(&self, key: &str, default: Option<T>, what: &str) -> Result<T, ConfigError> {
        match self.get(key) {
            Some(v) => v.parse().map_err(|_| invalid(key, format!("must be {what}, got `{v}`"))),
            None => default.ok_or_else(|| invalid(key, "is required")),
        }
    }

    /// Validates every key; `ic` is optional when `require_ic` is false
    /// (a resumed run takes its state from a snapshot) and then defaults to
    /// `single-mode-magnetic`.
    pub fn validate(&self, require_ic: bool) -> Result<RunConfig, ConfigError> {
        let real = "a real number";
        let dim: usize = self.number("dim", Some(2), "an integer")?;
        if dim != 2 && dim != 3 {
            return Err(invalid("dim", "must be 2 or 3"));
        }
        let n_per_axis: usize = self.number("n_per_axis", Some(64), "an integer")?;
        if n_per_axis < 8 || !n_per_axis.is_power_of_two() {
            return Err(invalid("n_per_axis", "must be a power of two >= 8"));
        }
        if dim == 3 && n_per_axis > 64 {
            return Err(invalid("n_per_axis", "must be <= 64 in 3D"));
        }
        let positive = |key: &str| -> Result<f64, ConfigError> {
            let v: f64 = self.number(key, None, real)?;
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(invalid(key, "must be > 0"))
            }
        };
        let nu = positive("nu")?;
        let dt = positive("dt")?;
        let t_end = if require_ic {
            positive("t_end")?
        } else {
            let v: f64 = self.number("t_end", None, real)?;
            if v >= 0.0 && v.is_finite() {
                v
            } else {
                return Err(invalid("t_end", "must be >= 0"));
            }
        };
        let ic = match self.get("ic") {
            Some(v) => v.parse::<Scenario>().map_err(|e| invalid("ic", e.to_string()))?,
            None if require_ic => return Err(invalid("ic", "is required")),
            None => Scenario::SingleModeMagnetic,
        };
        let seed: u64 = self.number("seed", Some(0), "a nonnegative integer")?;
        let cadence = |key: &str, default: u64| -> Result<u64, ConfigError> {
            let v: u64 = self.number(key, Some(default), "a positive integer")?;
            if v >= 1 {
                Ok(v)
            } else {
                Err(invalid(key, "must be >= 1"))
            }
        };
        let diagnostics_cadence = cadence("diagnostics_cadence", 10)?;
        let snapshot_cadence = cadence("snapshot_cadence", 1000)?;
        let epsilon_threshold: f64 = self.number("epsilon_threshold", Some(0.1), real)?;
        if !(epsilon_threshold > 0.0) {
            return Err(invalid("epsilon_threshold", "must be > 0"));
        }
        let out_dir = PathBuf::from(self.get("out_dir").unwrap_or("out"));
        let scheme = match self.get("scheme") {
            Some(v) => v.parse::<Scheme>().map_err(|e| invalid("scheme", e))?,
            None => Scheme::default(),
        };
        let cfl_limit: f64 = self.number("cfl_limit", Some(0.5), real)?;
        if !(cfl_limit > 0.0 && cfl_limit <= 1.0) {
            return Err(invalid("cfl_limit", "must lie in (0, 1]"));
        }
        let bkm_ceiling: f64 = self.number("bkm_ceiling", Some(1e6), real)?;
        if !(bkm_ceiling > 0.0) {
            return Err(invalid("bkm_ceiling", "must be > 0"));
        }
        Ok(RunConfig {
            dim,
            n_per_axis,
            nu,
            dt,
            t_end,
            ic,
            seed,
            diagnostics_cadence,
            snapshot_cadence,
            epsilon_threshold,
            out_dir,
            scheme,
            cfl_limit,
            bkm_ceiling,
        })
    }
}

/// Reads, applies [`OUT_DIR_ENV`] and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let mut raw = RawConfig::load(path)?;
    raw.apply_env();
    raw.validate(true)
}
