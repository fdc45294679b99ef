use alloc::{vec, vec::Vec};

/// How fast optical-carrier oscillations are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// The formulas evaluated at each instant.
    #[default]
    Instantaneous,
    /// The carrier phasor multiplying the anomalous terms is replaced by the
    /// unit phasor that minimises `var_x` (and `corr_var`); `var_y` is taken at
    /// the same phasor and is therefore the upper envelope.
    Envelope,
}

/// Row-major `[time x column]` table of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Table {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |r| self.get(r, col))
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }
}

/// Time series of per-cavity and pairwise observables.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    /// Ascending times in radian-time units.
    pub times: Vec<f64>,
    /// Cavity labels, one per column of the per-cavity tables.
    pub cavities: Vec<i64>,
    /// `<a^dag_p a_p>(t)`.
    pub photon_number: Table,
    /// `<(Delta X_p)^2>(t)`.
    pub var_x: Table,
    /// `<(Delta Y_p)^2>(t)`.
    pub var_y: Table,
    /// Cavity pairs, one per column of `corr_var`.
    pub pairs: Vec<(i64, i64)>,
    /// Correlation variance `Delta^2_{p,p'}(t)`; entangled when `< 4`.
    pub corr_var: Table,
}

impl ObservableSeries {
    pub fn new(times: Vec<f64>, cavities: Vec<i64>, pairs: Vec<(i64, i64)>) -> Self {
        let t = times.len();
        Self {
            photon_number: Table::zeros(t, cavities.len()),
            var_x: Table::zeros(t, cavities.len()),
            var_y: Table::zeros(t, cavities.len()),
            corr_var: Table::zeros(t, pairs.len()),
            times,
            cavities,
            pairs,
        }
    }

    pub fn cavity_column(&self, label: i64) -> Option<usize> {
        self.cavities.iter().position(|&c| c == label)
    }

    pub fn pair_column(&self, pair: (i64, i64)) -> Option<usize> {
        self.pairs.iter().position(|&p| p == pair)
    }

    /// Inseparability witness `Delta^2 < 4`.
    pub fn entangled(&self, row: usize, pair_col: usize) -> bool {
        self.corr_var.get(row, pair_col) < 4.0
    }
}
