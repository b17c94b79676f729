//! Plain-text `key=value` run configuration files.

use crate::geometry::Point;
use crate::sim::RunConfig;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {0}: expected key=value, got {1:?}")]
    Syntax(usize, String),
    #[error("line {0}: unknown key {1:?}")]
    UnknownKey(usize, String),
    #[error("line {0}: bad value for {1}: {2:?}")]
    BadValue(usize, String, String),
}

/// Parsed config file: run settings plus an optional map path.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub run: RunConfigOverrides,
    pub map: Option<String>,
}

/// Only the keys present in the file; applied on top of defaults (or an
/// existing config) so scenario files can be partial.
#[derive(Debug, Clone, Default)]
pub struct RunConfigOverrides {
    entries: Vec<(String, String)>,
}

impl RunConfigOverrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), ConfigError> {
        for (key, value) in &self.entries {
            apply_key(cfg, key, value)
                .map_err(|_| ConfigError::BadValue(0, key.clone(), value.clone()))?;
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut out = ConfigFile::default();
    let mut probe = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax(lineno + 1, line.to_string()));
        };
        let key = key.trim();
        let value = value.trim();
        if key == "map" {
            out.map = Some(value.to_string());
            continue;
        }
        // validate eagerly for a line-accurate error
        apply_key(&mut probe, key, value).map_err(|e| match e {
            KeyError::Unknown => ConfigError::UnknownKey(lineno + 1, key.to_string()),
            KeyError::Bad => ConfigError::BadValue(lineno + 1, key.to_string(), value.to_string()),
        })?;
        out.run.entries.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

enum KeyError {
    Unknown,
    Bad,
}

fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), KeyError> {
    fn num<T: std::str::FromStr>(v: &str) -> Result<T, KeyError> {
        v.parse().map_err(|_| KeyError::Bad)
    }
    match key {
        "detector" => cfg.detector = value.parse().map_err(|_| KeyError::Bad)?,
        "seed" => cfg.seed = num(value)?,
        "theta" => cfg.theta = num(value)?,
        "tau" => cfg.tau = num(value)?,
        "step" => cfg.step = num(value)?,
        "min_exploration_gain" => cfg.min_exploration_gain = num(value)?,
        "gain_radius" => cfg.gain_radius = num(value)?,
        "attempt_cap_factor" => cfg.attempt_cap_factor = num(value)?,
        "bias_probability" => cfg.bias_probability = num(value)?,
        "bias_radius" => cfg.bias_radius = num(value)?,
        "speed" => cfg.speed = num(value)?,
        "dt" => cfg.dt = num(value)?,
        "scan_period" => cfg.scan_period = num(value)?,
        "beam_count" => cfg.beam_count = num(value)?,
        "max_range" => cfg.max_range = num(value)?,
        "noise_sigma" => cfg.noise_sigma = num(value)?,
        "half_extent" => cfg.half_extent = num(value)?,
        "min_window_side" => cfg.min_window_side = num(value)?,
        "leg_max" => cfg.leg_max = num(value)?,
        "time_budget" => cfg.time_budget = num(value)?,
        "start_x" => {
            let x = num(value)?;
            let y = cfg.start.map_or(0.0, |p| p.y);
            cfg.start = Some(Point::new(x, y));
        }
        "start_y" => {
            let y = num(value)?;
            let x = cfg.start.map_or(0.0, |p| p.x);
            cfg.start = Some(Point::new(x, y));
        }
        _ => return Err(KeyError::Unknown),
    }
    Ok(())
}
