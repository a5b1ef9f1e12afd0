//! Flat `key = value` configuration files.
//!
//! One pair per line, `#` starts a comment, unknown and duplicate keys are
//! rejected. Phases are radians. Defaults: both squeeze parameters and all
//! phases 0, vacuum seed (`alpha = 0`), unit local oscillator (`beta = 1`),
//! `samples = exact`, `seed = 0`, `protocol = qsi`.

use upqi_core::imaging::{Protocol, Sampling};
use upqi_core::{FieldParams, SetupParams, SqueezerParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub r1: f64,
    pub r2: f64,
    pub phi_p1: f64,
    pub phi_p2: f64,
    pub phi_alpha: f64,
    pub phi_beta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub samples: Sampling,
    pub seed: u64,
    pub protocol: Protocol,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            r1: 0.0,
            r2: 0.0,
            phi_p1: 0.0,
            phi_p2: 0.0,
            phi_alpha: 0.0,
            phi_beta: 0.0,
            alpha: 0.0,
            beta: 1.0,
            samples: Sampling::Exact,
            seed: 0,
            protocol: Protocol::Qsi,
        }
    }
}

impl Config {
    /// Assemble the validated physical setup.
    pub fn setup(&self) -> Result<SetupParams, CliError> {
        Ok(SetupParams::new(
            SqueezerParams::new(self.r1, self.phi_p1)?,
            SqueezerParams::new(self.r2, self.phi_p2)?,
            FieldParams::new(self.alpha, self.phi_alpha, self.beta, self.phi_beta)?,
        ))
    }
}

pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let mut config = Config::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::ParseError {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(CliError::ParseError {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        seen.push(key.to_string());

        match key {
            "r1" => config.r1 = non_negative(key, value, line_no)?,
            "r2" => config.r2 = non_negative(key, value, line_no)?,
            "phi_p1" => config.phi_p1 = finite(key, value, line_no)?,
            "phi_p2" => config.phi_p2 = finite(key, value, line_no)?,
            "phi_alpha" => config.phi_alpha = finite(key, value, line_no)?,
            "phi_beta" => config.phi_beta = finite(key, value, line_no)?,
            "alpha" => config.alpha = non_negative(key, value, line_no)?,
            "beta" => config.beta = non_negative(key, value, line_no)?,
            "seed" => {
                config.seed = value.parse().map_err(|_| CliError::ParseError {
                    line: line_no,
                    message: format!("`seed` must be an unsigned 64-bit integer, got `{value}`"),
                })?
            }
            "samples" => {
                config.samples = if value == "exact" {
                    Sampling::Exact
                } else {
                    let n: u64 = value.parse().map_err(|_| CliError::ParseError {
                        line: line_no,
                        message: format!("`samples` must be an integer or `exact`, got `{value}`"),
                    })?;
                    if n < 2 {
                        return Err(CliError::OutOfRange {
                            line: line_no,
                            key: key.to_string(),
                        });
                    }
                    Sampling::Draws(n)
                }
            }
            "protocol" => {
                config.protocol = match value {
                    "qsi" => Protocol::Qsi,
                    "qfi" => Protocol::Qfi,
                    _ => {
                        return Err(CliError::ParseError {
                            line: line_no,
                            message: format!("`protocol` must be `qsi` or `qfi`, got `{value}`"),
                        })
                    }
                }
            }
            _ => {
                return Err(CliError::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                })
            }
        }
    }
    Ok(config)
}

fn finite(key: &str, value: &str, line: usize) -> Result<f64, CliError> {
    let v: f64 = value.parse().map_err(|_| CliError::ParseError {
        line,
        message: format!("`{key}` must be a number, got `{value}`"),
    })?;
    if !v.is_finite() {
        return Err(CliError::OutOfRange {
            line,
            key: key.to_string(),
        });
    }
    Ok(v)
}

fn non_negative(key: &str, value: &str, line: usize) -> Result<f64, CliError> {
    let v = finite(key, value, line)?;
    if v < 0.0 {
        return Err(CliError::OutOfRange {
            line,
            key: key.to_string(),
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults_everything_else() {
        let cfg = parse_config("r1 = 0.5\nr2 = 0.5\nalpha = 1\nbeta = 1").unwrap();
        assert_eq!(cfg.r1, 0.5);
        assert_eq!(cfg.phi_p1, 0.0);
        assert_eq!(cfg.phi_beta, 0.0);
        assert_eq!(cfg.samples, Sampling::Exact);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.protocol, Protocol::Qsi);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let cfg = parse_config("# setup\n\nr1 = 0.2 # inline\n  \nseed = 7\n").unwrap();
        assert_eq!(cfg.r1, 0.2);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn rejects_negative_squeeze() {
        match parse_config("r1 = -1") {
            Err(CliError::OutOfRange { line: 1, key }) => assert_eq!(key, "r1"),
            other => panic!("expected OutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_key() {
        match parse_config("foo = 3") {
            Err(CliError::UnknownKey { line: 1, key }) => assert_eq!(key, "foo"),
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_small_samples_and_non_finite() {
        assert!(matches!(
            parse_config("r1 = 1\nr1 = 2"),
            Err(CliError::ParseError { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("samples = 1"),
            Err(CliError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("alpha = inf"),
            Err(CliError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_config("r1"),
            Err(CliError::ParseError { line: 1, .. })
        ));
    }

    #[test]
    fn parses_samples_and_protocol() {
        let cfg = parse_config("samples = 1000\nprotocol = qfi").unwrap();
        assert_eq!(cfg.samples, Sampling::Draws(1000));
        assert_eq!(cfg.protocol, Protocol::Qfi);
        let cfg = parse_config("samples = exact").unwrap();
        assert_eq!(cfg.samples, Sampling::Exact);
        assert!(parse_config("protocol = other").is_err());
    }
}
