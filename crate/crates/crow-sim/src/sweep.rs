//! One-parameter sweeps over a config.

use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::error::{SimError, SimResult};

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn sweep_values(from: f64, to: f64, steps: usize) -> SimResult<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) || steps == 0 {
        return Err(SimError::Config(format!(
            "invalid sweep range {from}..{to} with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| from + (to - from) * (i as f64 / last))
        .collect())
}

/// Returns a copy of `config` with the number at the dotted `path` (e.g.
/// `state.u`, `system.omega0.1`) replaced by `value`.
pub fn with_parameter(
    config: &ExperimentConfig,
    path: &str,
    value: f64,
) -> SimResult<ExperimentConfig> {
    let mut doc = serde_json::to_value(config).expect("config serializes");
    let mut slot = &mut doc;
    for key in path.split('.') {
        slot = match slot {
            Value::Object(map) => map.get_mut(key),
            Value::Array(items) => key.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| {
            SimError::Config(format!(
                "sweep parameter `{path}` does not exist (at `{key}`)"
            ))
        })?;
    }
    *slot = match slot {
        Value::Number(n) if n.is_f64() => serde_json::json!(value),
        Value::Number(_) if value.fract() == 0.0 && value >= 0.0 => serde_json::json!(value as u64),
        Value::Number(_) => {
            return Err(SimError::Config(format!(
                "sweep parameter `{path}` is an integer; got {value}"
            )))
        }
        _ => {
            return Err(SimError::Config(format!(
                "sweep parameter `{path}` is not a number"
            )))
        }
    };
    let config: ExperimentConfig = serde_json::from_value(doc)
        .map_err(|e| SimError::Config(format!("sweep of `{path}`: {e}")))?;
    config.validate()?;
    Ok(config)
}
