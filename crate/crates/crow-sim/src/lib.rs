//! Experiment configs, figure presets and dataset output for `crow-core`.
//!
//! The `crowsim` binary wraps [`run`] and [`write_output`]; the same pieces
//! are usable as a library.

pub mod config;
mod error;
pub mod matrix;
pub mod output;
pub mod presets;
pub mod run;
pub mod sweep;

pub use config::{Engine, ExperimentConfig, Mode};
pub use error::{SimError, SimResult};
pub use matrix::load_matrix_spec;
pub use output::{write_output, Dataset, Format};
pub use presets::preset;
pub use run::{run, RunOutput, Summary};
