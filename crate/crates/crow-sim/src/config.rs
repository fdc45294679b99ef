//! Declarative experiment configuration (TOML).

use std::fs;
use std::path::{Path, PathBuf};

use crow_core::EvalMode;
use serde::{Deserialize, Serialize};

use crate::error::{SimError, SimResult};

/// A complete experiment: system, initial state, time window and outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub state: StateConfig,
    pub time: TimeWindow,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Complex numbers are written as `[re, im]`.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    /// Two identical cavities, `w_+ = omega - i gamma`, `w_- = w_+ - delta`.
    TwoCavity {
        omega: f64,
        delta: f64,
        gamma: f64,
        #[serde(default)]
        excited: i64,
    },
    /// Nearest-neighbour chain; `n_cavities` is only used by the mode-sum engine.
    Crow {
        omega0: ComplexPair,
        beta1: ComplexPair,
        #[serde(default = "default_chain_length")]
        n_cavities: usize,
        #[serde(default = "default_period")]
        period: f64,
        #[serde(default)]
        excited: i64,
    },
    /// Overlap and coupling matrices read from a text file.
    GeneralMatrix {
        matrix_file: PathBuf,
        #[serde(default)]
        excited: i64,
    },
}

fn default_chain_length() -> usize {
    201
}

fn default_period() -> f64 {
    1.0
}

impl SystemConfig {
    pub fn excited(&self) -> i64 {
        match self {
            SystemConfig::TwoCavity { excited, .. }
            | SystemConfig::Crow { excited, .. }
            | SystemConfig::GeneralMatrix { excited, .. } => *excited,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    Svs {
        u: f64,
        #[serde(default)]
        phi: f64,
    },
    Sts {
        u: f64,
        #[serde(default)]
        phi: f64,
        n_th: f64,
    },
    Coherent {
        eta: ComplexPair,
    },
}

/// `points` samples from `start` to `end`. With `scaled = true` the bounds are
/// in plot units (`delta t` for two cavities, `t / tau` for a chain).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    #[serde(default)]
    pub start: f64,
    pub end: f64,
    pub points: usize,
    #[serde(default)]
    pub scaled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Instantaneous,
    Envelope,
}

impl From<Mode> for EvalMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Instantaneous => EvalMode::Instantaneous,
            Mode::Envelope => EvalMode::Envelope,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Closed forms (two-cavity trigonometric, chain Bessel).
    #[default]
    Analytic,
    /// Sum over numerically or analytically obtained quasimodes.
    ModeSum,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub cavities: Vec<i64>,
    #[serde(default)]
    pub pairs: Vec<[i64; 2]>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub engine: Engine,
    /// Drop all imaginary parts of the system parameters.
    #[serde(default)]
    pub lossless: bool,
    /// Also run the lossless counterpart and report it alongside.
    #[serde(default)]
    pub compare_lossless: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> SimResult<Self> {
        let config: Self = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; a relative `matrix_file` is resolved against the
    /// config's directory.
    pub fn load(path: &Path) -> SimResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        let mut config = Self::from_toml_str(&text).map_err(|e| match e {
            SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        if let SystemConfig::GeneralMatrix { matrix_file, .. } = &mut config.system {
            if matrix_file.is_relative() {
                if let Some(dir) = path.parent() {
                    *matrix_file = dir.join(&*matrix_file);
                }
            }
        }
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable in TOML")
    }

    /// Schema-level checks; physical consistency is left to the engines.
    pub fn validate(&self) -> SimResult<()> {
        let mut numbers: Vec<(&str, f64)> = Vec::new();
        match &self.system {
            SystemConfig::TwoCavity {
                omega,
                delta,
                gamma,
                ..
            } => {
                numbers.extend([
                    ("system.omega", *omega),
                    ("system.delta", *delta),
                    ("system.gamma", *gamma),
                ]);
            }
            SystemConfig::Crow {
                omega0,
                beta1,
                n_cavities,
                period,
                ..
            } => {
                numbers.extend([
                    ("system.omega0", omega0[0]),
                    ("system.omega0", omega0[1]),
                    ("system.beta1", beta1[0]),
                    ("system.beta1", beta1[1]),
                    ("system.period", *period),
                ]);
                if *n_cavities < 2 {
                    return Err(SimError::Config(format!(
                        "system.n_cavities must be >= 2, got {n_cavities}"
                    )));
                }
            }
            SystemConfig::GeneralMatrix { .. } => {}
        }
        match &self.state {
            StateConfig::Svs { u, phi } => numbers.extend([("state.u", *u), ("state.phi", *phi)]),
            StateConfig::Sts { u, phi, n_th } => {
                numbers.extend([("state.u", *u), ("state.phi", *phi), ("state.n_th", *n_th)])
            }
            StateConfig::Coherent { eta } => {
                numbers.extend([("state.eta", eta[0]), ("state.eta", eta[1])])
            }
        }
        numbers.extend([("time.start", self.time.start), ("time.end", self.time.end)]);
        if let Some((name, value)) = numbers.iter().find(|(_, v)| !v.is_finite()) {
            return Err(SimError::Config(format!(
                "{name} must be finite, got {value}"
            )));
        }
        if self.time.points < 2 {
            return Err(SimError::Config(format!(
                "time.points must be >= 2, got {}",
                self.time.points
            )));
        }
        if self.time.start < 0.0 {
            return Err(SimError::Config(format!(
                "time.start must be >= 0, got {}",
                self.time.start
            )));
        }
        if self.time.end <= self.time.start {
            return Err(SimError::Config(format!(
                "time.end ({}) must exceed time.start ({})",
                self.time.end, self.time.start
            )));
        }
        if let Some(p) = self.output.pairs.iter().find(|p| p[0] == p[1]) {
            return Err(SimError::Config(format!(
                "pair [{}, {}] joins a cavity with itself",
                p[0], p[1]
            )));
        }
        if matches!(self.system, SystemConfig::GeneralMatrix { .. })
            && self.output.engine == Engine::Analytic
        {
            return Err(SimError::Config(
                "general_matrix systems have no closed form; set output.engine = \"mode_sum\""
                    .into(),
            ));
        }
        Ok(())
    }
}
