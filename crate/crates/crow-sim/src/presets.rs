//! Built-in experiments reproducing the published figures.

use std::f64::consts::PI;

use crate::config::{
    ComplexPair, Engine, ExperimentConfig, Mode, OutputConfig, StateConfig, SystemConfig,
    TimeWindow,
};
use crate::error::{SimError, SimResult};

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

/// Chain cavity frequency `(0.305 - 7.71e-5 i) 4 pi c / D` with `c = D = 1`.
pub const CHAIN_OMEGA0: ComplexPair = [0.305 * 4.0 * PI, -7.71e-5 * 4.0 * PI];
/// Chain nearest-neighbour coupling.
pub const CHAIN_BETA1: ComplexPair = [9.87e-3, -1.97e-5];
/// Squeezing amplitude used for the chain.
pub const CHAIN_U: f64 = 0.88;

/// Two-cavity frequencies: `delta = omega / 20`, `gamma = 0.02 delta`.
pub const PAIR_OMEGA: f64 = 1.0;
pub const PAIR_DELTA: f64 = PAIR_OMEGA / 20.0;
pub const PAIR_GAMMA: f64 = 0.02 * PAIR_DELTA;
pub const PAIR_U: f64 = 1.2;

fn chain(cavities: Vec<i64>, pairs: Vec<[i64; 2]>) -> ExperimentConfig {
    ExperimentConfig {
        system: SystemConfig::Crow {
            omega0: CHAIN_OMEGA0,
            beta1: CHAIN_BETA1,
            n_cavities: 201,
            period: 1.0,
            excited: 0,
        },
        state: StateConfig::Svs {
            u: CHAIN_U,
            phi: 0.0,
        },
        time: TimeWindow {
            start: 0.0,
            end: 20.0,
            points: 2001,
            scaled: true,
        },
        output: OutputConfig {
            cavities,
            pairs,
            mode: Mode::Envelope,
            engine: Engine::Analytic,
            lossless: false,
            compare_lossless: true,
        },
    }
}

/// Returns the named preset.
///
/// * `fig2`: two cavities, squeezed vacuum in the left one, `delta t` in `[0, 4 pi]`.
/// * `fig3`: chain, photon number and squeezing in cavities 0, 2, 4, 6.
/// * `fig4`: chain, cavities 0..=10 and the symmetric pairs, for the extrema table.
/// * `fig5`: chain, correlation variance of symmetric pairs.
///
/// The chain presets also carry the lossless comparison.
pub fn preset(name: &str) -> SimResult<ExperimentConfig> {
    Ok(match name {
        "fig2" => ExperimentConfig {
            system: SystemConfig::TwoCavity {
                omega: PAIR_OMEGA,
                delta: PAIR_DELTA,
                gamma: PAIR_GAMMA,
                excited: 0,
            },
            state: StateConfig::Svs {
                u: PAIR_U,
                phi: 0.0,
            },
            time: TimeWindow {
                start: 0.0,
                end: 4.0 * PI,
                points: 2001,
                scaled: true,
            },
            output: OutputConfig {
                cavities: vec![0, 1],
                pairs: vec![[0, 1]],
                mode: Mode::Envelope,
                engine: Engine::Analytic,
                lossless: false,
                compare_lossless: false,
            },
        },
        "fig3" => chain(vec![0, 2, 4, 6], vec![]),
        "fig4" => chain((0..=10).collect(), (1..=10).map(|p| [p, -p]).collect()),
        "fig5" => chain(vec![], vec![[1, -1], [2, -2], [4, -4], [6, -6]]),
        _ => {
            return Err(SimError::Config(format!(
                "unknown preset `{name}`; available: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(matches!(preset("fig9"), Err(SimError::Config(_))));
    }
}
