//! Flat `key = value` configuration documents for the CLI.

use std::fmt::Write as _;
use std::path::PathBuf;

use thiserror::Error;

use crate::engine::{ScenarioKind, SimConfig};
use crate::vec2::WorldBounds;

/// Everything a CLI invocation needs: the simulation parameters plus
/// harness settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub sim: SimConfig,
    pub replicates: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub capture_trajectory: bool,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            sim: SimConfig::default(),
            replicates: 10,
            master_seed: 42,
            output_dir: PathBuf::from("results"),
            capture_trajectory: false,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: cannot parse value `{value}` for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("line {line}: `{key}` = {value} is out of range ({expected})")]
    OutOfRange {
        line: usize,
        key: String,
        value: String,
        expected: String,
    },
}

/// Parses a config document. Unknown keys are rejected; every field not
/// mentioned keeps its default.
pub fn parse_config(text: &str) -> Result<CliConfig, ConfigError> {
    let mut config = CliConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: line_no,
                text: line.to_string(),
            });
        };
        apply(&mut config, key.trim(), value.trim(), line_no)?;
    }
    Ok(config)
}

/// Renders a config back into document form; parsing the output
/// reproduces the config.
pub fn emit_config(config: &CliConfig) -> String {
    let mut s = String::new();
    let sim = &config.sim;
    let _ = writeln!(s, "n_blue = {}", sim.n_blue);
    let _ = writeln!(s, "width = {}", sim.bounds.width);
    let _ = writeln!(s, "length = {}", sim.bounds.length);
    let _ = writeln!(s, "w_c = {}", sim.weights.cohesion);
    let _ = writeln!(s, "w_a = {}", sim.weights.alignment);
    let _ = writeln!(s, "w_s = {}", sim.weights.separation);
    let _ = writeln!(s, "graph_p = {}", sim.graph_p);
    let _ = writeln!(s, "eta = {}", sim.eta);
    let _ = writeln!(s, "tau_blue_leader = {}", sim.tau_blue_leader);
    let _ = writeln!(s, "tau_red = {}", sim.tau_red);
    let _ = writeln!(s, "trust_dynamics = {}", sim.trust_dynamics_enabled);
    let _ = writeln!(s, "scenario = {}", sim.scenario.label());
    let _ = writeln!(s, "iterations = {}", sim.iterations);
    let _ = writeln!(s, "delta = {}", sim.delta);
    let _ = writeln!(s, "r_sep = {}", sim.r_sep);
    let _ = writeln!(s, "v_max = {}", sim.v_max);
    let _ = writeln!(s, "leader_speed = {}", sim.leader_speed);
    let _ = writeln!(s, "max_steps_per_iteration = {}", sim.max_steps_per_iteration);
    let _ = writeln!(s, "replicates = {}", config.replicates);
    let _ = writeln!(s, "master_seed = {}", config.master_seed);
    let _ = writeln!(s, "output_dir = {}", config.output_dir.display());
    let _ = writeln!(s, "capture_trajectory = {}", config.capture_trajectory);
    s
}

fn apply(config: &mut CliConfig, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
    fn parse<T: std::str::FromStr>(
        key: &str,
        value: &str,
        line: usize,
    ) -> Result<T, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        value.parse().map_err(|e: T::Err| ConfigError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
            reason: e.to_string(),
        })
    }
    fn check_range(
        ok: bool,
        key: &str,
        value: &str,
        expected: &str,
        line: usize,
    ) -> Result<(), ConfigError> {
        if ok {
            Ok(())
        } else {
            Err(ConfigError::OutOfRange {
                line,
                key: key.to_string(),
                value: value.to_string(),
                expected: expected.to_string(),
            })
        }
    }

    let sim = &mut config.sim;
    match key {
        "n_blue" => {
            sim.n_blue = parse(key, value, line)?;
            check_range(sim.n_blue >= 1, key, value, "at least 1", line)?;
        }
        "width" => {
            let w: f64 = parse(key, value, line)?;
            check_range(w > 0.0, key, value, "positive", line)?;
            sim.bounds = WorldBounds::new(w, sim.bounds.length);
        }
        "length" => {
            let l: f64 = parse(key, value, line)?;
            check_range(l > 0.0, key, value, "positive", line)?;
            sim.bounds = WorldBounds::new(sim.bounds.width, l);
        }
        "w_c" | "w_a" | "w_s" => {
            let w: f64 = parse(key, value, line)?;
            check_range((0.0..=1.0).contains(&w), key, value, "within [0, 1]", line)?;
            match key {
                "w_c" => sim.weights.cohesion = w,
                "w_a" => sim.weights.alignment = w,
                _ => sim.weights.separation = w,
            }
        }
        "graph_p" | "eta" => {
            let v: f64 = parse(key, value, line)?;
            check_range((0.0..=1.0).contains(&v), key, value, "within [0, 1]", line)?;
            if key == "graph_p" {
                sim.graph_p = v;
            } else {
                sim.eta = v;
            }
        }
        "tau_blue_leader" | "tau_red" => {
            let v: f64 = parse(key, value, line)?;
            check_range(
                (-1.0..=1.0).contains(&v),
                key,
                value,
                "within [-1, 1]",
                line,
            )?;
            if key == "tau_blue_leader" {
                sim.tau_blue_leader = v;
            } else {
                sim.tau_red = v;
            }
        }
        "trust_dynamics" => sim.trust_dynamics_enabled = parse(key, value, line)?,
        "scenario" => {
            sim.scenario = match value {
                "velocity_noise" => ScenarioKind::VelocityNoise,
                "network_changes" => ScenarioKind::NetworkChanges,
                "both" => ScenarioKind::Both,
                _ => {
                    return Err(ConfigError::BadValue {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                        reason: "expected velocity_noise, network_changes, or both".to_string(),
                    })
                }
            }
        }
        "iterations" => {
            sim.iterations = parse(key, value, line)?;
            check_range(sim.iterations >= 2, key, value, "at least 2", line)?;
        }
        "delta" | "r_sep" | "v_max" | "leader_speed" => {
            let v: f64 = parse(key, value, line)?;
            check_range(v > 0.0, key, value, "positive", line)?;
            match key {
                "delta" => sim.delta = v,
                "r_sep" => sim.r_sep = v,
                "v_max" => sim.v_max = v,
                _ => sim.leader_speed = v,
            }
        }
        "max_steps_per_iteration" => {
            sim.max_steps_per_iteration = parse(key, value, line)?;
            check_range(
                sim.max_steps_per_iteration >= 1,
                key,
                value,
                "at least 1",
                line,
            )?;
        }
        "replicates" => {
            config.replicates = parse(key, value, line)?;
            check_range(config.replicates >= 2, key, value, "at least 2", line)?;
        }
        "master_seed" => config.master_seed = parse(key, value, line)?,
        "output_dir" => config.output_dir = PathBuf::from(value),
        "capture_trajectory" => config.capture_trajectory = parse(key, value, line)?,
        _ => {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            })
        }
    }
    Ok(())
}
