//! Dispatch from a config to the engines, plus the extrema summary.

use crow_core::analytic::{crow_series, two_cavity_series, CrowParams, TwoCavityParams};
use crow_core::general::evolve;
use crow_core::modes::{crow_bloch_modes, solve_generalized_modes, two_cavity_modes};
use crow_core::states::{coherent_moments, sts_moments, svs_moments};
use crow_core::{CavityChainSpec, Complex64, EvalMode, InitialStateMoments, ObservableSeries};
use serde::{Deserialize, Serialize};

use crate::config::{Engine, ExperimentConfig, StateConfig, SystemConfig};
use crate::error::{SimError, SimResult};
use crate::matrix::load_matrix_spec;

/// Observables of one run, with the conversion to plot time.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub series: ObservableSeries,
    /// `t_scaled = time_scale * t`.
    pub time_scale: f64,
    /// Meaning of the scaled time column.
    pub scaled_unit: String,
    /// Lossless counterpart when `compare_lossless` is set.
    pub lossless: Option<ObservableSeries>,
    pub summary: Summary,
}

impl RunOutput {
    pub fn scaled_times(&self) -> Vec<f64> {
        self.series
            .times
            .iter()
            .map(|t| t * self.time_scale)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityExtrema {
    pub label: i64,
    pub n_max: f64,
    pub t_n_max: f64,
    pub var_x_min: f64,
    pub t_var_x_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairExtrema {
    pub pair: [i64; 2],
    pub corr_var_min: f64,
    pub t_corr_var_min: f64,
}

/// Per-cavity maxima and minima over the sampled window (times are raw).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub cavities: Vec<CavityExtrema>,
    pub pairs: Vec<PairExtrema>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub lossy: Extrema,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lossless: Option<Extrema>,
}

fn arg_extreme(
    values: impl Iterator<Item = f64>,
    times: &[f64],
    better: impl Fn(f64, f64) -> bool,
) -> (f64, f64) {
    let mut best = (f64::NAN, f64::NAN);
    for (v, &t) in values.zip(times) {
        if best.0.is_nan() || better(v, best.0) {
            best = (v, t);
        }
    }
    best
}

pub fn extrema(series: &ObservableSeries) -> Extrema {
    let t = &series.times;
    let cavities = series
        .cavities
        .iter()
        .enumerate()
        .map(|(c, &label)| {
            let (n_max, t_n_max) = arg_extreme(series.photon_number.column(c), t, |a, b| a > b);
            let (var_x_min, t_var_x_min) = arg_extreme(series.var_x.column(c), t, |a, b| a < b);
            CavityExtrema {
                label,
                n_max,
                t_n_max,
                var_x_min,
                t_var_x_min,
            }
        })
        .collect();
    let pairs = series
        .pairs
        .iter()
        .enumerate()
        .map(|(c, &(p, q))| {
            let (corr_var_min, t_corr_var_min) =
                arg_extreme(series.corr_var.column(c), t, |a, b| a < b);
            PairExtrema {
                pair: [p, q],
                corr_var_min,
                t_corr_var_min,
            }
        })
        .collect();
    Extrema { cavities, pairs }
}

pub fn initial_state(config: &StateConfig, excited: i64) -> SimResult<InitialStateMoments> {
    Ok(match *config {
        StateConfig::Svs { u, phi } => svs_moments(u, phi, excited)?,
        StateConfig::Sts { u, phi, n_th } => sts_moments(u, phi, n_th, excited)?,
        StateConfig::Coherent { eta } => coherent_moments(Complex64::new(eta[0], eta[1]), excited)?,
    })
}

/// The chain spec a config describes (before any lossless reduction).
pub fn chain_spec(system: &SystemConfig) -> SimResult<CavityChainSpec> {
    Ok(match system {
        SystemConfig::TwoCavity {
            omega,
            delta,
            gamma,
            ..
        } => TwoCavityParams::new(*omega, *delta, *gamma)?.chain_spec(),
        SystemConfig::Crow {
            omega0,
            beta1,
            n_cavities,
            period,
            ..
        } => CavityChainSpec::nearest_neighbour(
            *n_cavities,
            Complex64::new(omega0[0], omega0[1]),
            Complex64::new(beta1[0], beta1[1]),
            *period,
        ),
        SystemConfig::GeneralMatrix { matrix_file, .. } => load_matrix_spec(matrix_file)?,
    })
}

/// Two cavities are parametrised by `(omega, delta, gamma)`, so their lossless
/// counterpart sets `gamma = 0`; zeroing `Im beta1` instead would also shift
/// the splitting.
fn lossless_spec(system: &SystemConfig, spec: &CavityChainSpec) -> SimResult<CavityChainSpec> {
    Ok(match system {
        SystemConfig::TwoCavity { .. } => TwoCavityParams::from_chain_spec(spec)?
            .lossless()
            .chain_spec(),
        _ => spec.lossless(),
    })
}

/// Plot-time scale and its description.
fn time_scale(system: &SystemConfig, spec: &CavityChainSpec) -> SimResult<(f64, String)> {
    Ok(match system {
        SystemConfig::TwoCavity { delta, .. } => (*delta, "delta * t".into()),
        SystemConfig::Crow { .. } => (
            spec.zeta1().re,
            "t / tau, tau = 1 / Re(Omega0 beta1)".into(),
        ),
        SystemConfig::GeneralMatrix { .. } => (1.0, "t".into()),
    })
}

pub fn time_grid(config: &ExperimentConfig, scale: f64) -> Vec<f64> {
    let w = &config.time;
    let (start, end) = if w.scaled {
        (w.start / scale, w.end / scale)
    } else {
        (w.start, w.end)
    };
    let last = (w.points - 1) as f64;
    (0..w.points)
        .map(|i| start + (end - start) * (i as f64 / last))
        .collect()
}

fn pairs_of(config: &ExperimentConfig) -> Vec<(i64, i64)> {
    config.output.pairs.iter().map(|p| (p[0], p[1])).collect()
}

fn check_labels(
    config: &ExperimentConfig,
    valid: impl Fn(i64) -> bool,
    what: &str,
) -> SimResult<()> {
    let excited = config.system.excited();
    let used = config
        .output
        .cavities
        .iter()
        .chain(config.output.pairs.iter().flatten());
    match std::iter::once(&excited).chain(used).find(|&&l| !valid(l)) {
        Some(l) => Err(SimError::Config(format!(
            "cavity label {l} is outside {what}"
        ))),
        None => Ok(()),
    }
}

fn evaluate(
    config: &ExperimentConfig,
    spec: &CavityChainSpec,
    times: &[f64],
    mode: EvalMode,
) -> SimResult<ObservableSeries> {
    let state = initial_state(&config.state, config.system.excited())?;
    let cavities = &config.output.cavities;
    let pairs = pairs_of(config);
    let series = match (&config.system, config.output.engine) {
        (SystemConfig::TwoCavity { .. }, Engine::Analytic) => {
            check_labels(config, |l| l == 0 || l == 1, "the two-cavity labels {0, 1}")?;
            let params = TwoCavityParams::from_chain_spec(spec)?;
            let full = two_cavity_series(&params, &state, times, mode)?;
            select(&full, cavities, &pairs)
        }
        (SystemConfig::TwoCavity { .. }, Engine::ModeSum) => {
            check_labels(config, |l| l == 0 || l == 1, "the two-cavity labels {0, 1}")?;
            evolve(
                &two_cavity_modes(spec)?,
                &state,
                times,
                cavities,
                &pairs,
                mode,
            )?
        }
        (SystemConfig::Crow { excited, .. }, Engine::Analytic) => {
            let params = CrowParams::from_spec(spec, *excited)?;
            crow_series(&params, &state, times, cavities, &pairs, mode)?
        }
        (SystemConfig::Crow { .. }, Engine::ModeSum) => {
            let basis = crow_bloch_modes(spec)?;
            let first = basis.first_label;
            let last = first + basis.n_cavities() as i64 - 1;
            check_labels(
                config,
                |l| (first..=last).contains(&l),
                &format!("the ring labels {first}..={last}"),
            )?;
            evolve(&basis, &state, times, cavities, &pairs, mode)?
        }
        (SystemConfig::GeneralMatrix { .. }, Engine::ModeSum) => {
            let n = spec.n_cavities as i64;
            check_labels(
                config,
                |l| (0..n).contains(&l),
                &format!("the matrix labels 0..{n}"),
            )?;
            evolve(
                &solve_generalized_modes(spec)?,
                &state,
                times,
                cavities,
                &pairs,
                mode,
            )?
        }
        (SystemConfig::GeneralMatrix { .. }, Engine::Analytic) => {
            return Err(SimError::Config(
                "general_matrix systems need engine = \"mode_sum\"".into(),
            ))
        }
    };
    Ok(series)
}

/// Picks columns of the two-cavity closed form, which always returns both
/// cavities and the single pair.
fn select(full: &ObservableSeries, cavities: &[i64], pairs: &[(i64, i64)]) -> ObservableSeries {
    let mut out = ObservableSeries::new(full.times.clone(), cavities.to_vec(), pairs.to_vec());
    for row in 0..full.times.len() {
        for (col, &label) in cavities.iter().enumerate() {
            let src = full.cavity_column(label).expect("label checked");
            out.photon_number
                .set(row, col, full.photon_number.get(row, src));
            out.var_x.set(row, col, full.var_x.get(row, src));
            out.var_y.set(row, col, full.var_y.get(row, src));
        }
        for col in 0..pairs.len() {
            // Delta^2 is symmetric in the pair.
            out.corr_var.set(row, col, full.corr_var.get(row, 0));
        }
    }
    out
}

/// Runs the experiment described by `config`.
pub fn run(config: &ExperimentConfig) -> SimResult<RunOutput> {
    config.validate()?;
    let mut spec = chain_spec(&config.system)?;
    if config.output.lossless {
        spec = lossless_spec(&config.system, &spec)?;
    }
    let (time_scale, scaled_unit) = time_scale(&config.system, &spec)?;
    if !(time_scale.is_finite() && time_scale > 0.0) {
        return Err(SimError::Engine(crow_core::Error::Spec(format!(
            "time scale {time_scale} is not positive"
        ))));
    }
    let times = time_grid(config, time_scale);
    let mode = config.output.mode.into();
    let series = evaluate(config, &spec, &times, mode)?;
    let lossless = if config.output.compare_lossless {
        Some(evaluate(
            config,
            &lossless_spec(&config.system, &spec)?,
            &times,
            mode,
        )?)
    } else {
        None
    };
    let summary = Summary {
        lossy: extrema(&series),
        lossless: lossless.as_ref().map(extrema),
    };
    Ok(RunOutput {
        series,
        time_scale,
        scaled_unit,
        lossless,
        summary,
    })
}
