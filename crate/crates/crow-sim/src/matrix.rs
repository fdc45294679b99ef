//! Text format for general overlap/coupling matrices.
//!
//! ```text
//! # comments and blank lines are ignored
//! n 3
//! omega0 1.0 -0.001
//! A
//! 1 0  0.01 0  0 0        (n rows of n complex numbers as re im pairs)
//! ...
//! B
//! ...
//! omegas                  (optional: n lines "re im", one per cavity)
//! ...
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use crow_core::linalg::CMatrix;
use crow_core::{CavityChainSpec, Complex64, ComplexFrequency};

use crate::error::{SimError, SimResult};

pub fn load_matrix_spec(path: &Path) -> SimResult<CavityChainSpec> {
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    parse_matrix_spec(&text, path)
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

struct Parser<'a> {
    path: PathBuf,
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> SimError {
        SimError::Parse {
            path: self.path.clone(),
            line,
            column,
            message: message.into(),
        }
    }

    fn end_of_file(&self) -> SimError {
        let line = self.lines.last().map_or(1, |l| l.number + 1);
        self.error(line, 1, "unexpected end of file")
    }

    fn next(&mut self) -> Option<&Line<'a>> {
        let line = self.lines.get(self.pos);
        self.pos += 1;
        line
    }

    fn keyword(&mut self, word: &str, values: usize) -> SimResult<(usize, Vec<f64>)> {
        let Some(line) = self.lines.get(self.pos) else {
            return Err(self.end_of_file());
        };
        let (col, first) = line.tokens[0];
        if first != word {
            return Err(self.error(
                line.number,
                col,
                format!("expected `{word}`, found `{first}`"),
            ));
        }
        let number = line.number;
        let numbers = self.numbers(self.pos, 1)?;
        if numbers.len() != values {
            return Err(self.error(
                number,
                col,
                format!("`{word}` takes {values} value(s), found {}", numbers.len()),
            ));
        }
        self.pos += 1;
        Ok((number, numbers))
    }

    fn numbers(&self, index: usize, skip: usize) -> SimResult<Vec<f64>> {
        let line = &self.lines[index];
        line.tokens[skip..]
            .iter()
            .map(|&(col, tok)| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        self.error(line.number, col, format!("`{tok}` is not a finite number"))
                    })
            })
            .collect()
    }

    fn matrix(&mut self, name: &str, n: usize) -> SimResult<CMatrix> {
        self.keyword(name, 0)?;
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let index = self.pos;
            let Some(line) = self.next() else {
                return Err(self.end_of_file());
            };
            let number = line.number;
            if line.tokens[0].1.parse::<f64>().is_err()
                && line.tokens[0].1.chars().all(char::is_alphabetic)
            {
                return Err(SimError::Dimension {
                    path: self.path.clone(),
                    message: format!(
                        "matrix {name} has {r} row(s) before line {number}, expected {n}"
                    ),
                });
            }
            let values = self.numbers(index, 0)?;
            if values.len() != 2 * n {
                return Err(SimError::Dimension {
                    path: self.path.clone(),
                    message: format!(
                        "line {number}: row {} of {name} has {} numbers, expected {} (re im pairs for {n} columns)",
                        r + 1,
                        values.len(),
                        2 * n
                    ),
                });
            }
            rows.push(
                values
                    .chunks(2)
                    .map(|p| Complex64::new(p[0], p[1]))
                    .collect(),
            );
        }
        Ok(CMatrix::from_rows(&rows).expect("rows have equal length"))
    }
}

pub fn parse_matrix_spec(text: &str, path: &Path) -> SimResult<CavityChainSpec> {
    let lines = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (col, ch) in body
                .char_indices()
                .chain(std::iter::once((body.len(), ' ')))
            {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(col),
                    (true, Some(s)) => {
                        tokens.push((s + 1, &body[s..col]));
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect();
    let mut p = Parser {
        path: path.to_path_buf(),
        lines,
        pos: 0,
    };

    let (line, n) = p.keyword("n", 1)?;
    let n_value = n[0];
    if n_value < 1.0 || n_value.fract() != 0.0 {
        return Err(p.error(
            line,
            3,
            format!("cavity count must be a positive integer, got {n_value}"),
        ));
    }
    let n = n_value as usize;
    let (_, w) = p.keyword("omega0", 2)?;
    let omega0 = Complex64::new(w[0], w[1]);
    let a = p.matrix("A", n)?;
    let b = p.matrix("B", n)?;

    let mut frequencies = None;
    if p.pos < p.lines.len() {
        p.keyword("omegas", 0)?;
        let mut f = Vec::with_capacity(n);
        while p.pos < p.lines.len() {
            let index = p.pos;
            let number = p.lines[index].number;
            let v = p.numbers(index, 0)?;
            if v.len() != 2 {
                return Err(p.error(
                    number,
                    1,
                    format!("expected `re im`, found {} value(s)", v.len()),
                ));
            }
            f.push(ComplexFrequency(Complex64::new(v[0], v[1])));
            p.pos += 1;
        }
        if f.len() != n {
            return Err(SimError::Dimension {
                path: p.path.clone(),
                message: format!("{} per-cavity frequencies for {n} cavities", f.len()),
            });
        }
        frequencies = Some(f);
    }

    let mut spec = CavityChainSpec::from_matrices(omega0, a, b).map_err(|e| match e {
        crow_core::Error::Dimension(message) => SimError::Dimension {
            path: p.path.clone(),
            message,
        },
        other => SimError::Config(format!("{}: {other}", p.path.display())),
    })?;
    spec.cavity_frequencies = frequencies;
    spec.validate()
        .map_err(|e| SimError::Config(format!("{}: {e}", p.path.display())))?;
    Ok(spec)
}

/// Writes a spec in the format read by [`load_matrix_spec`].
pub fn format_matrix_spec(spec: &CavityChainSpec) -> Option<String> {
    let (a, b) = (spec.overlap.as_ref()?, spec.coupling.as_ref()?);
    let mut out = format!(
        "n {}\nomega0 {:e} {:e}\n",
        spec.n_cavities, spec.omega0.0.re, spec.omega0.0.im
    );
    for (name, m) in [("A", a), ("B", b)] {
        out.push_str(name);
        out.push('\n');
        for r in 0..m.rows() {
            let row: Vec<String> = m
                .row(r)
                .iter()
                .map(|z| format!("{:e} {:e}", z.re, z.im))
                .collect();
            out.push_str(&row.join("  "));
            out.push('\n');
        }
    }
    if let Some(f) = &spec.cavity_frequencies {
        out.push_str("omegas\n");
        for w in f {
            out.push_str(&format!("{:e} {:e}\n", w.0.re, w.0.im));
        }
    }
    Some(out)
}
