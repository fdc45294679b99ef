//! Mode-sum evolution engine.
//!
//! With only cavity `c` excited, every single-cavity operator evolves as
//! `a_p(t) = G_p(t) a_c + (vacuum terms)` where
//!
//! ```text
//! G_p(t) = sum_m v_mp e^{-i w_m t} [(V^T)^{-1}]_{mc}
//! ```
//!
//! For a unitary coefficient matrix `[(V^T)^{-1}]_{mc} = conj(v_mc)` and this
//! is the plain quasimode sum; the inverse keeps the propagator exact when
//! numerically solved eigenvectors are not orthogonal. All observables are
//! quadratic in `G`:
//!
//! ```text
//! n_p      = n |G_p|^2
//! var_x_p  = 1 + 2 n |G_p|^2 + <aa> G_p^2 + <a^dag a^dag> conj(G_p)^2
//! var_y_p  = 1 + 2 n |G_p|^2 - <aa> G_p^2 - <a^dag a^dag> conj(G_p)^2
//! D^2_pp'  = 4 + 4 n (|G_p|^2 + |G_p'|^2) - 4 <aa> G_p G_p' - 4 <a^dag a^dag> conj(G_p G_p')
//! ```
//!
//! so the quadruple mode sums collapse to one sum per cavity and time.

use alloc::{format, vec::Vec};

use num_complex::Complex64;

use crate::linalg::inverse_with_condition;
use crate::{Error, EvalMode, InitialStateMoments, ObservableSeries, QuasimodeBasis, Result};

/// Imaginary residue above which an observable is rejected.
const NON_REAL_TOLERANCE: f64 = 1e-8;

/// Precomputed propagator weights from the excited cavity to a set of cavities.
#[derive(Debug, Clone)]
pub struct Propagator {
    frequencies: Vec<Complex64>,
    /// `weights[j][m] = v_{m p_j} [(V^T)^{-1}]_{m c}`
    weights: Vec<Vec<Complex64>>,
    cavities: Vec<i64>,
}

impl Propagator {
    pub fn new(basis: &QuasimodeBasis, excited: i64, cavities: &[i64]) -> Result<Self> {
        let n = basis.n_cavities();
        if basis.n_modes() != n || basis.coefficients.rows() != n {
            return Err(Error::Dimension(format!(
                "basis has {} modes over {} cavities; a square basis is required",
                basis.n_modes(),
                n
            )));
        }
        let c = column(basis, excited)?;
        let (dual, _) = inverse_with_condition(&basis.coefficients.transpose())?;
        let weights = cavities
            .iter()
            .map(|&p| {
                let q = column(basis, p)?;
                Ok((0..n)
                    .map(|m| basis.coefficients[(m, q)] * dual[(m, c)])
                    .collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        Ok(Self {
            frequencies: basis.frequencies.iter().map(|w| w.0).collect(),
            weights,
            cavities: cavities.to_vec(),
        })
    }

    /// `G_p(t)` for every configured cavity.
    pub fn amplitudes(&self, t: f64, out: &mut Vec<Complex64>) {
        let phasors: Vec<Complex64> = self
            .frequencies
            .iter()
            .map(|w| (Complex64::new(0.0, -t) * w).exp())
            .collect();
        out.clear();
        out.extend(self.weights.iter().map(|w| {
            w.iter()
                .zip(&phasors)
                .map(|(a, b)| a * b)
                .sum::<Complex64>()
        }));
    }

    pub fn cavities(&self) -> &[i64] {
        &self.cavities
    }
}

fn column(basis: &QuasimodeBasis, label: i64) -> Result<usize> {
    basis.column_of(label).ok_or_else(|| {
        Error::Dimension(format!(
            "cavity {label} is outside the basis labels {}..={}",
            basis.first_label,
            basis.first_label + basis.n_cavities() as i64 - 1
        ))
    })
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::Domain(format!(
            "times must be finite and >= 0, got {t}"
        )));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("times must be ascending".into()));
    }
    Ok(())
}

/// Evaluates photon numbers and quadrature variances at `cavities` and the
/// correlation variance for `pairs` on the given time grid.
pub fn evolve(
    basis: &QuasimodeBasis,
    state: &InitialStateMoments,
    times: &[f64],
    cavities: &[i64],
    pairs: &[(i64, i64)],
    mode: EvalMode,
) -> Result<ObservableSeries> {
    check_times(times)?;
    if let Some(&(p, _)) = pairs.iter().find(|(p, q)| p == q) {
        return Err(Error::Pair { cavity: p });
    }
    // Amplitudes are needed for the reported cavities and every pair member.
    let mut labels: Vec<i64> = cavities.to_vec();
    for &(p, q) in pairs {
        for l in [p, q] {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
    }
    let prop = Propagator::new(basis, state.excited_index, &labels)?;
    let pair_idx: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(p, q)| {
            let i = labels
                .iter()
                .position(|l| l == p)
                .expect("pair label registered");
            let j = labels
                .iter()
                .position(|l| l == q)
                .expect("pair label registered");
            (i, j)
        })
        .collect();

    let mut series = ObservableSeries::new(times.to_vec(), cavities.to_vec(), pairs.to_vec());
    let mut g = Vec::with_capacity(labels.len());
    for (row, &t) in times.iter().enumerate() {
        prop.amplitudes(t, &mut g);
        for (col, &amp) in g.iter().take(cavities.len()).enumerate() {
            let (n, vx, vy) = cavity_moments(state, amp, mode)?;
            series.photon_number.set(row, col, n);
            series.var_x.set(row, col, vx);
            series.var_y.set(row, col, vy);
        }
        for (col, &(i, j)) in pair_idx.iter().enumerate() {
            series
                .corr_var
                .set(row, col, correlation(state, g[i], g[j], mode)?);
        }
    }
    Ok(series)
}

/// Photon number in every cavity of the basis.
pub fn photon_number_series(
    basis: &QuasimodeBasis,
    state: &InitialStateMoments,
    times: &[f64],
) -> Result<ObservableSeries> {
    let all: Vec<i64> = basis.labels().collect();
    evolve(basis, state, times, &all, &[], EvalMode::Instantaneous)
}

/// Quadrature variances (and photon numbers) in every cavity of the basis.
pub fn quadrature_series(
    basis: &QuasimodeBasis,
    state: &InitialStateMoments,
    times: &[f64],
    mode: EvalMode,
) -> Result<ObservableSeries> {
    let all: Vec<i64> = basis.labels().collect();
    evolve(basis, state, times, &all, &[], mode)
}

/// Correlation variance for each requested pair.
pub fn correlation_series(
    basis: &QuasimodeBasis,
    state: &InitialStateMoments,
    times: &[f64],
    pairs: &[(i64, i64)],
    mode: EvalMode,
) -> Result<ObservableSeries> {
    evolve(basis, state, times, &[], pairs, mode)
}

fn real_part(z: Complex64, scale: f64) -> Result<f64> {
    if z.im.abs() > NON_REAL_TOLERANCE * scale.max(1.0) {
        return Err(Error::NonReal {
            residue: z.im.abs(),
        });
    }
    Ok(z.re)
}

fn cavity_moments(
    s: &InitialStateMoments,
    g: Complex64,
    mode: EvalMode,
) -> Result<(f64, f64, f64)> {
    let g2 = g.norm_sqr();
    let n = s.n_avg * g2;
    let anomalous = match mode {
        EvalMode::Instantaneous => {
            let z = s.anom * g * g + s.anom_conj * (g * g).conj();
            real_part(z, s.anom.norm() * g2)?
        }
        EvalMode::Envelope => -2.0 * s.anom.norm() * g2,
    };
    Ok((n, 1.0 + 2.0 * n + anomalous, 1.0 + 2.0 * n - anomalous))
}

fn correlation(
    s: &InitialStateMoments,
    gp: Complex64,
    gq: Complex64,
    mode: EvalMode,
) -> Result<f64> {
    let normal = 4.0 * s.n_avg * (gp.norm_sqr() + gq.norm_sqr());
    let anomalous = match mode {
        EvalMode::Instantaneous => {
            let prod = gp * gq;
            let z = -4.0 * (s.anom * prod + s.anom_conj * prod.conj());
            real_part(z, 4.0 * s.anom.norm() * prod.norm())?
        }
        EvalMode::Envelope => -8.0 * s.anom.norm() * gp.norm() * gq.norm(),
    };
    Ok(4.0 + normal + anomalous)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{crow_bloch_modes, two_cavity_modes, CavityChainSpec};
    use crate::states::{svs_moments, InitialStateMoments};
    use alloc::vec;
    use core::f64::consts::PI;

    fn pair_basis(gamma: f64) -> QuasimodeBasis {
        // w_+ = 1 - i gamma, w_- = 1 - Delta - i gamma with Delta = 0.05.
        let delta = 0.05;
        let omega0 = Complex64::new(1.0 - delta / 2.0, -gamma);
        let spec =
            CavityChainSpec::nearest_neighbour(2, omega0, Complex64::new(delta, 0.0) / omega0, 1.0);
        two_cavity_modes(&spec).unwrap()
    }

    #[test]
    fn initial_values() {
        let basis = pair_basis(0.001);
        let s = svs_moments(1.2, 0.0, 0).unwrap();
        let out = quadrature_series(&basis, &s, &[0.0], EvalMode::Instantaneous).unwrap();
        assert!((out.photon_number.get(0, 0) - s.n_avg).abs() < 1e-14);
        assert!(out.photon_number.get(0, 1).abs() < 1e-14);
        assert!((out.var_x.get(0, 0) - (-2.4f64).exp()).abs() < 1e-13);
        assert!((out.var_y.get(0, 0) - 2.4f64.exp()).abs() < 1e-12);
        assert!((out.var_x.get(0, 1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lossless_full_transfer() {
        let basis = pair_basis(0.0);
        let s = svs_moments(1.2, 0.0, 0).unwrap();
        let t = PI / 0.05;
        let out = photon_number_series(&basis, &s, &[t]).unwrap();
        assert!((out.photon_number.get(0, 1) - s.n_avg).abs() < 1e-12);
        assert!(out.photon_number.get(0, 0).abs() < 1e-12);
    }

    #[test]
    fn lossy_transfer_matches_decay() {
        let gamma = 0.02 * 0.05;
        let basis = pair_basis(gamma);
        let s = svs_moments(1.2, 0.0, 0).unwrap();
        let t = PI / 0.05;
        let out = photon_number_series(&basis, &s, &[t]).unwrap();
        let expect = 0.5 * s.n_avg * (-2.0 * gamma * t).exp() * 2.0;
        assert!((out.photon_number.get(0, 1) - expect).abs() < 1e-12);
    }

    #[test]
    fn vacuum_stays_at_the_boundary() {
        let basis = pair_basis(0.001);
        let s = InitialStateMoments::vacuum(0);
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 3.1).collect();
        for mode in [EvalMode::Instantaneous, EvalMode::Envelope] {
            let out = evolve(&basis, &s, &times, &[0, 1], &[(0, 1)], mode).unwrap();
            assert!(out.var_x.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
            assert!(out.var_y.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
            assert!(out
                .corr_var
                .values()
                .iter()
                .all(|&v| (v - 4.0).abs() < 1e-15));
        }
    }

    #[test]
    fn argument_errors() {
        let basis = pair_basis(0.001);
        let s = svs_moments(1.0, 0.0, 0).unwrap();
        assert!(matches!(
            correlation_series(&basis, &s, &[0.0], &[(1, 1)], EvalMode::Envelope),
            Err(Error::Pair { cavity: 1 })
        ));
        assert!(matches!(
            evolve(&basis, &s, &[0.0], &[5], &[], EvalMode::Envelope),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            photon_number_series(&basis, &s.at_cavity(2), &[0.0]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            photon_number_series(&basis, &s, &[1.0, 0.5]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            photon_number_series(&basis, &s, &[-1.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inconsistent_state_is_non_real() {
        let basis = pair_basis(0.001);
        let mut s = svs_moments(1.0, 0.3, 0).unwrap();
        s.anom_conj = s.anom;
        let err = quadrature_series(&basis, &s, &[0.0, 1.0], EvalMode::Instantaneous);
        assert!(matches!(err, Err(Error::NonReal { .. })));
    }

    #[test]
    fn bloch_chain_conserves_photons_without_loss() {
        let spec = CavityChainSpec::nearest_neighbour(
            41,
            Complex64::new(3.0, 0.0),
            Complex64::new(0.01, 0.0),
            1.0,
        );
        let basis = crow_bloch_modes(&spec).unwrap();
        let s = svs_moments(0.88, 0.0, 0).unwrap();
        let times = vec![0.0, 100.0, 250.0, 400.0];
        let out = photon_number_series(&basis, &s, &times).unwrap();
        for row in 0..times.len() {
            let total: f64 = (0..out.cavities.len())
                .map(|c| out.photon_number.get(row, c))
                .sum();
            assert!((total - s.n_avg).abs() < 1e-12, "row {row}: {total}");
        }
    }
}
