//! Sweep configuration: flat `key = value` text with `#` comments and
//! bracketed comma-separated arrays.
//!
//! ```text
//! # angles in radians: [start, stop, steps]
//! theta1_range   = [0, 3.141592653589793, 181]
//! epsilon_values = [0.0, 0.5, 1.0]
//! symmetric      = false
//! output_path    = sweep.csv
//! format         = csv
//! sample_count   = 0
//! seed           = 42
//! ```
//!
//! Every key is optional; `symmetric = true` forces `theta2 = theta1` per row
//! and is mutually exclusive with an explicit `theta2_range`.

use std::f64::consts::PI;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: cannot parse `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("line {line}: unknown key `{field}`")]
    UnknownKey { line: usize, field: String },
    #[error("line {line}: duplicate key `{field}`")]
    DuplicateKey { line: usize, field: String },
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
}

/// Inclusive angle range sampled with `steps` evenly spaced points
/// (`steps = 1` keeps only `start`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl AngleRange {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let width = self.stop - self.start;
        (0..self.steps)
            .map(|i| self.start + width * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub theta1_range: AngleRange,
    pub theta2_range: AngleRange,
    pub epsilon_values: Vec<f64>,
    /// Force `theta2 = theta1` on every row.
    pub symmetric: bool,
    pub output_path: PathBuf,
    pub format: OutputFormat,
    /// Monte Carlo draws per row; 0 disables sampling.
    pub sample_count: u64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let full = AngleRange {
            start: 0.0,
            stop: PI,
            steps: 181,
        };
        Self {
            theta1_range: full,
            theta2_range: full,
            epsilon_values: vec![1.0],
            symmetric: false,
            output_path: PathBuf::from("sweep.csv"),
            format: OutputFormat::Csv,
            sample_count: 0,
            seed: 42,
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_array(raw: &str, line: usize, field: &str) -> Result<Vec<f64>, ConfigError> {
    let trimmed = raw.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| ConfigError::Parse {
            line,
            field: field.to_string(),
            message: "expected a bracketed array like [a, b, c]".to_string(),
        })?;
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|e| ConfigError::Parse {
                line,
                field: field.to_string(),
                message: format!("`{s}`: {e}"),
            })
        })
        .collect()
}

fn parse_range(raw: &str, line: usize, field: &str) -> Result<AngleRange, ConfigError> {
    let values = parse_array(raw, line, field)?;
    if values.len() != 3 {
        return Err(ConfigError::Parse {
            line,
            field: field.to_string(),
            message: format!("expected [start, stop, steps], got {} values", values.len()),
        });
    }
    let steps_f = values[2];
    if steps_f.fract() != 0.0 || steps_f < 1.0 {
        return Err(ConfigError::Parse {
            line,
            field: field.to_string(),
            message: format!("steps must be a positive integer, got {steps_f}"),
        });
    }
    Ok(AngleRange {
        start: values[0],
        stop: values[1],
        steps: steps_f as usize,
    })
}

fn parse_scalar<T: std::str::FromStr>(raw: &str, line: usize, field: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    raw.trim().parse::<T>().map_err(|e| ConfigError::Parse {
        line,
        field: field.to_string(),
        message: format!("`{}`: {e}", raw.trim()),
    })
}

/// Parses configuration text, applies defaults, and validates ranges.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut cfg = SweepConfig::default();
    let mut seen: Vec<String> = Vec::new();
    let mut theta2_set = false;
    let mut output_path_set = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            field: line.to_string(),
            message: "expected `key = value`".to_string(),
        })?;
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                field: key.to_string(),
            });
        }
        seen.push(key.to_string());

        match key {
            "theta1_range" => cfg.theta1_range = parse_range(value, line_no, key)?,
            "theta2_range" => {
                cfg.theta2_range = parse_range(value, line_no, key)?;
                theta2_set = true;
            }
            "epsilon_values" => cfg.epsilon_values = parse_array(value, line_no, key)?,
            "symmetric" => cfg.symmetric = parse_scalar(value, line_no, key)?,
            "output_path" => {
                cfg.output_path = PathBuf::from(value);
                output_path_set = true;
            }
            "format" => {
                cfg.format = match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => {
                        return Err(ConfigError::Parse {
                            line: line_no,
                            field: key.to_string(),
                            message: format!("`{other}` is not one of: csv, json"),
                        })
                    }
                }
            }
            "sample_count" => cfg.sample_count = parse_scalar(value, line_no, key)?,
            "seed" => cfg.seed = parse_scalar(value, line_no, key)?,
            other => {
                return Err(ConfigError::UnknownKey {
                    line: line_no,
                    field: other.to_string(),
                })
            }
        }
    }

    if cfg.symmetric && theta2_set {
        return Err(ConfigError::Invalid {
            field: "theta2_range".to_string(),
            message: "mutually exclusive with symmetric = true".to_string(),
        });
    }
    if !output_path_set && cfg.format == OutputFormat::Json {
        cfg.output_path = PathBuf::from("sweep.json");
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &SweepConfig) -> Result<(), ConfigError> {
    for (field, range) in [
        ("theta1_range", cfg.theta1_range),
        ("theta2_range", cfg.theta2_range),
    ] {
        if !range.start.is_finite() || !range.stop.is_finite() {
            return Err(ConfigError::Invalid {
                field: field.to_string(),
                message: "angles must be finite".to_string(),
            });
        }
        if range.start > range.stop {
            return Err(ConfigError::Invalid {
                field: field.to_string(),
                message: format!("start {} exceeds stop {}", range.start, range.stop),
            });
        }
        if range.steps < 1 {
            return Err(ConfigError::Invalid {
                field: field.to_string(),
                message: "steps must be at least 1".to_string(),
            });
        }
    }
    if cfg.epsilon_values.is_empty() {
        return Err(ConfigError::Invalid {
            field: "epsilon_values".to_string(),
            message: "at least one strength is required".to_string(),
        });
    }
    for &eps in &cfg.epsilon_values {
        if !(0.0..=1.0).contains(&eps) {
            return Err(ConfigError::Invalid {
                field: "epsilon_values".to_string(),
                message: format!("{eps} is outside [0, 1]"),
            });
        }
    }
    Ok(())
}
