//! Run configuration: defaults, JSON files, embedded configs of earlier
//! outputs, `--set` overrides and sweep grids.

use std::path::Path;

use impurity_thermometry::estimators::EstimatorKind;
use impurity_thermometry::fisher::AsymptoticCase;
use impurity_thermometry::fit::{lin_space, log_space};
use impurity_thermometry::Regime;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Bose-gas constants used by the `friction` command, next to `impurity_mass`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Medium {
    pub boson_mass: f64,
    pub sound_velocity: f64,
    pub coupling: f64,
    pub hbar: f64,
    pub kb: f64,
}

impl Default for Medium {
    fn default() -> Self {
        Self {
            boson_mass: 1.0,
            sound_velocity: 1.0,
            coupling: 0.1,
            hbar: 1.0,
            kb: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReflectionSpec {
    Unit,
    Quadratic { c: f64 },
    /// Quadratic model calibrated to the coefficient of a quartic regime.
    Calibrated { regime: Regime },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropagationMethod {
    Gaussian,
    Spectral,
    Fdm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FisherMethodSpec {
    Gaussian,
    General,
    Numeric,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    Temperature,
    Exposure,
    InitialMomentum,
    InitialWidth,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::Temperature => "temperature",
            SweepParameter::Exposure => "exposure",
            SweepParameter::InitialMomentum => "initial_momentum",
            SweepParameter::InitialWidth => "initial_width",
        }
    }
}

/// Every knob of every command. Unused fields are ignored by a command but
/// still recorded, so an output fully describes how it was made.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    /// Filled in during resolution when absent.
    pub format: Option<Format>,

    pub temperature: f64,
    pub second_temperature: f64,
    pub impurity_mass: f64,
    pub gamma: f64,
    pub exponent: u32,
    pub initial_momentum: f64,
    pub initial_width: f64,
    /// Exposure time in relaxation times at `temperature`.
    pub exposure: f64,
    /// Second-bath exposure in relaxation times at `second_temperature`.
    pub second_exposure: f64,

    pub medium: Medium,
    pub reflection: ReflectionSpec,
    pub momentum: f64,
    /// Reduced temperatures `kb T / (m v^2)` for `friction`.
    pub reduced_temperatures: String,

    pub method: PropagationMethod,
    pub grid_points: usize,
    pub modes: usize,
    pub steps_per_tau: f64,

    pub samples: usize,

    pub fisher_method: FisherMethodSpec,
    pub asymptotic_case: AsymptoticCase,

    pub estimator: EstimatorKind,
    pub trials: usize,
    pub samples_per_trial: usize,

    pub figure1_temperatures: Vec<f64>,
    pub figure1_points: usize,
    /// Largest exposure of the curve in relaxation times.
    pub figure1_span: f64,

    pub sweep_parameter: SweepParameter,
    pub sweep_grid: String,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            format: None,
            temperature: 0.1,
            second_temperature: 0.1,
            impurity_mass: 1.0,
            gamma: 1.0,
            exponent: 4,
            initial_momentum: 1.0,
            initial_width: 0.0,
            exposure: 1.0,
            second_exposure: 1.0,
            medium: Medium::default(),
            reflection: ReflectionSpec::Calibrated { regime: Regime::Weak },
            momentum: 1.0,
            reduced_temperatures: "1e-3:1e-2:10log".into(),
            method: PropagationMethod::Gaussian,
            grid_points: 2048,
            modes: 200,
            steps_per_tau: 2000.0,
            samples: 100_000,
            fisher_method: FisherMethodSpec::Gaussian,
            asymptotic_case: AsymptoticCase::TauDeltaZero,
            estimator: EstimatorKind::MomentumMean,
            trials: 10_000,
            samples_per_trial: 1000,
            figure1_temperatures: vec![0.3, 0.2, 0.1],
            figure1_points: 500,
            figure1_span: 5.0,
            sweep_parameter: SweepParameter::Temperature,
            sweep_grid: "1e-3:1e-1:21log".into(),
        }
    }
}

/// A config file is either a plain config object or an earlier output, in
/// which case its embedded config is used. Returns the recorded command too.
fn read_config_value(path: &Path) -> CliResult<(Value, Option<String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    if text.starts_with('#') {
        let mut command = None;
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            if let Some(rest) = line.strip_prefix("# command: ") {
                command = Some(rest.trim().to_string());
            }
            if let Some(rest) = line.strip_prefix("# config: ") {
                let value = serde_json::from_str(rest).map_err(|e| CliError::config(format!("{}: bad embedded config: {e}", path.display())))?;
                return Ok((value, command));
            }
        }
        return Err(CliError::config(format!("{}: no embedded config line", path.display())));
    }
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    match value {
        Value::Object(mut map) if map.contains_key("config") && map.contains_key("version") => {
            let command = map.get("command").and_then(Value::as_str).map(str::to_string);
            Ok((map.remove("config").unwrap_or_default(), command))
        }
        other => Ok((other, None)),
    }
}

/// Sets `path` (dot-separated) in a JSON object to `raw`, parsed as JSON when
/// possible and as a string otherwise.
fn set_path(root: &mut Value, path: &str, raw: &str) -> CliResult<()> {
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let mut keys = path.split('.').peekable();
    while let Some(key) = keys.next() {
        let map = node
            .as_object_mut()
            .ok_or_else(|| CliError::config(format!("cannot set `{path}`: `{key}` is not inside an object")))?;
        if keys.peek().is_none() {
            map.insert(key.to_string(), value);
            return Ok(());
        }
        node = map.entry(key.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    Err(CliError::config("empty --set path"))
}

/// Builds the effective config: defaults, then the file, then overrides.
pub fn resolve(
    command: &str,
    file: Option<&Path>,
    sets: &[String],
    seed: Option<u64>,
    format: Option<Format>,
    default_format: Format,
) -> CliResult<Config> {
    let mut value = serde_json::to_value(Config::default()).expect("default config serializes");
    if let Some(path) = file {
        let (loaded, recorded) = read_config_value(path)?;
        if let Some(recorded) = recorded {
            if recorded != command {
                return Err(CliError::config(format!("{} was produced by `{recorded}`, not `{command}`", path.display())));
            }
        }
        let Value::Object(loaded) = loaded else {
            return Err(CliError::config(format!("{}: config must be a JSON object", path.display())));
        };
        for (k, v) in loaded {
            // nested objects replace wholesale, mirroring how they are written
            value[k.as_str()] = v;
        }
    }
    for set in sets {
        let (path, raw) = set
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("--set expects key=value, got `{set}`")))?;
        set_path(&mut value, path.trim(), raw.trim())?;
    }
    let mut config: Config = serde_json::from_value(value).map_err(|e| CliError::config(e.to_string()))?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(format) = format {
        config.format = Some(format);
    }
    config.format.get_or_insert(default_format);
    Ok(config)
}

/// Parses a grid: `a:b:Nlog` (log-spaced), `a:b:N` (linear) or a comma list.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::config(format!("bad grid `{spec}`: {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => {
            let (a, b) = (number(a)?, number(b)?);
            let n = n.trim();
            let (count, log) = match n.strip_suffix("log") {
                Some(c) => (c, true),
                None => (n, false),
            };
            let count: usize = count.parse().map_err(|_| bad("point count must be an integer"))?;
            if count < 2 {
                return Err(bad("need at least two points"));
            }
            if log {
                if !(a > 0.0 && b > 0.0) {
                    return Err(bad("log grids need positive endpoints"));
                }
                Ok(log_space(a, b, count))
            } else {
                Ok(lin_space(a, b, count))
            }
        }
        [single] => single.split(',').map(number).collect(),
        _ => Err(bad("expected a:b:N, a:b:Nlog or a comma list")),
    }
}
