//! CSV and JSON datasets.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crow_core::{ObservableSeries, Table};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{SimError, SimResult};
use crate::run::{RunOutput, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub time: String,
    pub scaled_time: String,
    pub quadratures: String,
}

/// Everything needed to interpret and re-run a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    pub version: String,
    pub units: Units,
    pub config: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
}

impl Metadata {
    pub fn new(config: &ExperimentConfig, output: &RunOutput, timestamp: bool) -> Self {
        let created_unix = timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Self {
            generator: "crowsim".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            units: Units {
                time: "radians of the configured frequency unit (c = D = 1 for chains)".into(),
                scaled_time: output.scaled_unit.clone(),
                quadratures: "X = a + a^dag, Y = i(a - a^dag); vacuum variance 1".into(),
            },
            config: config.clone(),
            created_unix,
        }
    }
}

/// Column-oriented copy of an [`ObservableSeries`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub times: Vec<f64>,
    pub scaled_times: Vec<f64>,
    pub cavities: Vec<i64>,
    pub pairs: Vec<[i64; 2]>,
    /// One inner vector per cavity.
    pub photon_number: Vec<Vec<f64>>,
    pub var_x: Vec<Vec<f64>>,
    pub var_y: Vec<Vec<f64>>,
    /// One inner vector per pair.
    pub corr_var: Vec<Vec<f64>>,
}

fn columns(t: &Table) -> Vec<Vec<f64>> {
    (0..t.cols()).map(|c| t.column(c).collect()).collect()
}

fn fill(t: &mut Table, cols: &[Vec<f64>], what: &str) -> SimResult<()> {
    if cols.len() != t.cols() || cols.iter().any(|c| c.len() != t.rows()) {
        return Err(SimError::Config(format!("{what} has the wrong shape")));
    }
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            t.set(r, c, v);
        }
    }
    Ok(())
}

impl SeriesRecord {
    pub fn new(series: &ObservableSeries, time_scale: f64) -> Self {
        Self {
            times: series.times.clone(),
            scaled_times: series.times.iter().map(|t| t * time_scale).collect(),
            cavities: series.cavities.clone(),
            pairs: series.pairs.iter().map(|&(p, q)| [p, q]).collect(),
            photon_number: columns(&series.photon_number),
            var_x: columns(&series.var_x),
            var_y: columns(&series.var_y),
            corr_var: columns(&series.corr_var),
        }
    }

    pub fn to_series(&self) -> SimResult<ObservableSeries> {
        let pairs = self.pairs.iter().map(|p| (p[0], p[1])).collect();
        let mut s = ObservableSeries::new(self.times.clone(), self.cavities.clone(), pairs);
        fill(&mut s.photon_number, &self.photon_number, "photon_number")?;
        fill(&mut s.var_x, &self.var_x, "var_x")?;
        fill(&mut s.var_y, &self.var_y, "var_y")?;
        fill(&mut s.corr_var, &self.corr_var, "corr_var")?;
        Ok(s)
    }
}

/// The JSON document written by `crowsim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub metadata: Metadata,
    pub series: SeriesRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lossless_series: Option<SeriesRecord>,
    pub summary: Summary,
}

impl Dataset {
    pub fn new(config: &ExperimentConfig, output: &RunOutput, timestamp: bool) -> Self {
        Self {
            metadata: Metadata::new(config, output, timestamp),
            series: SeriesRecord::new(&output.series, output.time_scale),
            lossless_series: output
                .lossless
                .as_ref()
                .map(|s| SeriesRecord::new(s, output.time_scale)),
            summary: output.summary.clone(),
        }
    }
}

pub fn to_json(dataset: &Dataset) -> String {
    let mut text = serde_json::to_string_pretty(dataset).expect("dataset serializes");
    text.push('\n');
    text
}

pub fn read_json(path: &Path) -> SimResult<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| SimError::Config(format!("{}: {e}", path.display())))
}

/// 17 significant digits, enough to recover every `f64` exactly.
fn num(out: &mut String, v: f64) {
    let _ = write!(out, "{v:.16e}");
}

fn header_lines(meta: &Metadata) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} {}", meta.generator, meta.version);
    let _ = writeln!(out, "# time: {}", meta.units.time);
    let _ = writeln!(out, "# t_scaled: {}", meta.units.scaled_time);
    let _ = writeln!(out, "# quadratures: {}", meta.units.quadratures);
    let _ = writeln!(
        out,
        "# config: {}",
        serde_json::to_string(&meta.config).expect("config serializes")
    );
    if let Some(t) = meta.created_unix {
        let _ = writeln!(out, "# created_unix: {t}");
    }
    out
}

/// Series as CSV. A series with no cavities and no pairs is written as
/// metadata and header only.
pub fn series_csv(meta: &Metadata, series: &ObservableSeries, time_scale: f64) -> String {
    let mut out = header_lines(meta);
    let mut head = vec!["t_raw".to_string(), "t_scaled".to_string()];
    for p in &series.cavities {
        for q in ["n", "var_x", "var_y", "sd_x", "sd_y"] {
            head.push(format!("{q}_{p}"));
        }
    }
    for (p, q) in &series.pairs {
        head.push(format!("corrvar_{p}_{q}"));
        head.push(format!("entangled_{p}_{q}"));
    }
    out.push_str(&head.join(","));
    out.push('\n');
    if series.cavities.is_empty() && series.pairs.is_empty() {
        return out;
    }
    for (row, &t) in series.times.iter().enumerate() {
        num(&mut out, t);
        out.push(',');
        num(&mut out, t * time_scale);
        for c in 0..series.cavities.len() {
            let (vx, vy) = (series.var_x.get(row, c), series.var_y.get(row, c));
            for v in [
                series.photon_number.get(row, c),
                vx,
                vy,
                vx.sqrt(),
                vy.sqrt(),
            ] {
                out.push(',');
                num(&mut out, v);
            }
        }
        for c in 0..series.pairs.len() {
            out.push(',');
            num(&mut out, series.corr_var.get(row, c));
            out.push_str(if series.entangled(row, c) { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

/// Extrema in long form: one quantity per row.
pub fn summary_csv(meta: &Metadata, summary: &Summary, time_scale: f64) -> String {
    let mut out = header_lines(meta);
    out.push_str("case,p,q,quantity,value,t_raw,t_scaled\n");
    let mut row = |case: &str, p: i64, q: Option<i64>, quantity: &str, value: f64, t: f64| {
        let q = q.map(|q| q.to_string()).unwrap_or_default();
        let _ = write!(out, "{case},{p},{q},{quantity},");
        num(&mut out, value);
        out.push(',');
        num(&mut out, t);
        out.push(',');
        num(&mut out, t * time_scale);
        out.push('\n');
    };
    for (case, ext) in std::iter::once(("lossy", &summary.lossy))
        .chain(summary.lossless.as_ref().map(|e| ("lossless", e)))
    {
        for c in &ext.cavities {
            row(case, c.label, None, "n_max", c.n_max, c.t_n_max);
            row(case, c.label, None, "var_x_min", c.var_x_min, c.t_var_x_min);
        }
        for p in &ext.pairs {
            row(
                case,
                p.pair[0],
                Some(p.pair[1]),
                "corr_var_min",
                p.corr_var_min,
                p.t_corr_var_min,
            );
        }
    }
    out
}

/// Companion file name: `dir/stem_suffix.ext`.
pub fn companion(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}{ext}"))
}

fn write(path: &Path, text: &str) -> SimResult<()> {
    fs::write(path, text).map_err(|e| SimError::io(path, e))
}

/// Writes a run to `path`; returns every file written. CSV output puts the
/// lossless series and the extrema in `*_lossless.csv` and `*_summary.csv`;
/// JSON holds everything in one document.
pub fn write_output(
    config: &ExperimentConfig,
    output: &RunOutput,
    format: Format,
    path: &Path,
    timestamp: bool,
) -> SimResult<Vec<PathBuf>> {
    let meta = Metadata::new(config, output, timestamp);
    match format {
        Format::Json => {
            let dataset = Dataset::new(config, output, timestamp);
            write(path, &to_json(&dataset))?;
            Ok(vec![path.to_path_buf()])
        }
        Format::Csv => {
            let mut written = vec![path.to_path_buf()];
            write(path, &series_csv(&meta, &output.series, output.time_scale))?;
            if let Some(lossless) = &output.lossless {
                let p = companion(path, "lossless");
                write(&p, &series_csv(&meta, lossless, output.time_scale))?;
                written.push(p);
            }
            let p = companion(path, "summary");
            write(&p, &summary_csv(&meta, &output.summary, output.time_scale))?;
            written.push(p);
            Ok(written)
        }
    }
}

/// Text for standard output: the main series (CSV) or the whole document (JSON).
pub fn render(
    config: &ExperimentConfig,
    output: &RunOutput,
    format: Format,
    timestamp: bool,
) -> String {
    match format {
        Format::Json => to_json(&Dataset::new(config, output, timestamp)),
        Format::Csv => series_csv(
            &Metadata::new(config, output, timestamp),
            &output.series,
            output.time_scale,
        ),
    }
}
