//! Closed-form engines.
//!
//! Two identical cavities with equal mode decay `gamma` and splitting
//! `Delta = w_+ - w_-` evolve with simple trigonometric envelopes; a
//! nearest-neighbour periodic chain evolves with Bessel functions of the
//! complex argument `zeta1 t`, `zeta1 = Omega0 beta1`. This module also holds
//! the large-distance estimators for arrival time, velocity and peak values.

use alloc::{format, vec::Vec};

use num_complex::Complex64;
// Needed without std; redundant when std is linked elsewhere in the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::general::check_times;
use crate::modes::CavityChainSpec;
use crate::specfun::{airy_constant_c1, bessel_i0, bessel_j_signed, ARRIVAL_C0};
use crate::{ComplexFrequency, Error, EvalMode, InitialStateMoments, ObservableSeries, Result};

/// Left and right cavity labels of the two-cavity system.
pub const LEFT: i64 = 0;
pub const RIGHT: i64 = 1;

/// Two-cavity parameters with `w_+ = omega - i gamma`, `w_- = omega - delta - i gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCavityParams {
    pub omega: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl TwoCavityParams {
    pub fn new(omega: f64, delta: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            omega,
            delta,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.omega.is_finite() && self.delta.is_finite() && self.gamma.is_finite();
        if !finite || self.delta <= 0.0 || self.gamma < 0.0 || self.omega <= self.delta {
            return Err(Error::Spec(format!(
                "two-cavity parameters need delta > 0, gamma >= 0, omega > delta (got omega = {}, delta = {}, gamma = {})",
                self.omega, self.delta, self.gamma
            )));
        }
        Ok(())
    }

    pub fn lossless(self) -> Self {
        Self { gamma: 0.0, ..self }
    }

    /// Nearest-neighbour spec whose `Omega0 (1 ± beta1/2)` reproduces `w_±`
    /// exactly: `Omega0 = omega - delta/2 - i gamma`, `beta1 = delta / Omega0`.
    pub fn chain_spec(&self) -> CavityChainSpec {
        let omega0 = Complex64::new(self.omega - 0.5 * self.delta, -self.gamma);
        CavityChainSpec::nearest_neighbour(2, omega0, Complex64::new(self.delta, 0.0) / omega0, 1.0)
    }

    /// Inverse of [`chain_spec`](Self::chain_spec); fails when the two modes
    /// decay at different rates.
    pub fn from_chain_spec(spec: &CavityChainSpec) -> Result<Self> {
        let basis = crate::modes::two_cavity_modes(spec)?;
        let (plus, minus) = (basis.frequencies[0].0, basis.frequencies[1].0);
        if (plus.im - minus.im).abs() > 1e-12 * plus.norm() {
            return Err(Error::Spec(format!(
                "modes decay at different rates ({} vs {})",
                -plus.im, -minus.im
            )));
        }
        Self::new(plus.re, plus.re - minus.re, -plus.im)
    }
}

/// Closed-form two-cavity observables with the left cavity excited.
///
/// Columns: cavities `[LEFT, RIGHT]`, pair `(LEFT, RIGHT)`.
pub fn two_cavity_series(
    params: &TwoCavityParams,
    state: &InitialStateMoments,
    times: &[f64],
    mode: EvalMode,
) -> Result<ObservableSeries> {
    params.validate()?;
    check_times(times)?;
    if state.excited_index != LEFT {
        return Err(Error::Spec(format!(
            "two-cavity formulas assume the left cavity ({LEFT}) is excited, got {}",
            state.excited_index
        )));
    }
    let TwoCavityParams {
        omega,
        delta,
        gamma,
    } = *params;
    let n = state.n_avg;
    let (aa, adad) = (state.anom, state.anom_conj);
    let mut out =
        ObservableSeries::new(times.to_vec(), [LEFT, RIGHT].into(), [(LEFT, RIGHT)].into());
    let phase = |x: f64| Complex64::new(0.0, x).exp();

    for (row, &t) in times.iter().enumerate() {
        let decay = (-2.0 * gamma * t).exp();
        let cos = (delta * t).cos();
        let envelope = [1.0 + cos, 1.0 - cos];
        for (col, sign) in [1.0, -1.0].into_iter().enumerate() {
            out.photon_number
                .set(row, col, 0.5 * n * decay * envelope[col]);
            let (x, y) = match mode {
                EvalMode::Instantaneous => {
                    let fast = phase(-(2.0 * omega - delta) * t);
                    let anomalous = (0.5 * (aa * fast + adad * fast.conj())).re;
                    (n + sign * anomalous, n - sign * anomalous)
                }
                EvalMode::Envelope => (n - aa.norm(), n + aa.norm()),
            };
            out.var_x.set(row, col, 1.0 + decay * envelope[col] * x);
            out.var_y.set(row, col, 1.0 + decay * envelope[col] * y);
        }
        let anomalous = match mode {
            EvalMode::Instantaneous => {
                let up = phase(-(2.0 * omega + delta) * t) - phase(-(2.0 * omega - delta) * t);
                let a = aa * phase(delta * t) * up;
                let b = adad * phase(-delta * t) * up.conj();
                -(a + b).re
            }
            EvalMode::Envelope => -4.0 * aa.norm() * (delta * t).sin().abs(),
        };
        out.corr_var
            .set(row, 0, 4.0 + decay * (4.0 * n + anomalous));
    }
    Ok(out)
}

/// Parameters of the Bessel closed forms for a nearest-neighbour chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrowParams {
    /// `zeta1 = Omega0 beta1`
    pub zeta1: Complex64,
    /// `-Im(Omega0)`
    pub gamma: f64,
    pub omega0: ComplexFrequency,
    /// `1 / Re(zeta1)`, the single-period transit time.
    pub tau: f64,
    /// Label of the excited cavity.
    pub c_index: i64,
}

impl CrowParams {
    pub fn from_spec(spec: &CavityChainSpec, c_index: i64) -> Result<Self> {
        spec.validate()?;
        let zeta1 = spec.zeta1();
        let p = Self {
            zeta1,
            gamma: spec.omega0.gamma(),
            omega0: spec.omega0,
            tau: 1.0 / zeta1.re,
            c_index,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) || self.gamma.is_nan() || self.gamma < 0.0 {
            return Err(Error::Spec(format!(
                "chain needs Re(zeta1) > 0 and gamma >= 0 (got tau = {}, gamma = {})",
                self.tau, self.gamma
            )));
        }
        Ok(())
    }
}

/// `i^k` without trigonometry.
fn quarter_turns(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Bessel closed forms for photon number, quadratures and correlation
/// variance in a nearest-neighbour chain; `cavities` and `pairs` carry
/// absolute labels, offsets `dp = p - c` are taken internally.
pub fn crow_series(
    params: &CrowParams,
    state: &InitialStateMoments,
    times: &[f64],
    cavities: &[i64],
    pairs: &[(i64, i64)],
    mode: EvalMode,
) -> Result<ObservableSeries> {
    params.validate()?;
    check_times(times)?;
    if let Some(&(p, _)) = pairs.iter().find(|(p, q)| p == q) {
        return Err(Error::Pair { cavity: p });
    }
    if state.excited_index != params.c_index {
        return Err(Error::Spec(format!(
            "state excites cavity {} but the chain parameters use {}",
            state.excited_index, params.c_index
        )));
    }
    let c = params.c_index;
    let mut offsets: Vec<i64> = cavities.iter().map(|p| p - c).collect();
    for &(p, q) in pairs {
        for dp in [p - c, q - c] {
            if !offsets.contains(&dp) {
                offsets.push(dp);
            }
        }
    }
    let slot = |dp: i64| {
        offsets
            .iter()
            .position(|&o| o == dp)
            .expect("offset registered")
    };
    let n = state.n_avg;
    let (aa, adad) = (state.anom, state.anom_conj);
    let w0 = params.omega0.0;
    let mut out = ObservableSeries::new(times.to_vec(), cavities.to_vec(), pairs.to_vec());
    let mut bessel = Vec::with_capacity(offsets.len());

    for (row, &t) in times.iter().enumerate() {
        let z = params.zeta1 * t;
        bessel.clear();
        for &dp in &offsets {
            bessel.push(bessel_j_signed(dp, z)?);
        }
        let decay = (-2.0 * params.gamma * t).exp();
        // e^{-2i Omega0 t} and e^{2i conj(Omega0) t}
        let carrier = (Complex64::new(0.0, -2.0 * t) * w0).exp();
        let carrier_conj = (Complex64::new(0.0, 2.0 * t) * w0.conj()).exp();

        for (col, &p) in cavities.iter().enumerate() {
            let dp = p - c;
            let j = bessel[slot(dp)];
            let j2 = j.norm_sqr();
            let occupation = n * decay * j2;
            let anomalous = match mode {
                EvalMode::Instantaneous => {
                    let sign = quarter_turns(2 * dp);
                    (aa * sign * j * j * carrier + adad * sign * (j * j).conj() * carrier_conj).re
                }
                EvalMode::Envelope => -2.0 * aa.norm() * decay * j2,
            };
            out.photon_number.set(row, col, occupation);
            out.var_x.set(row, col, 1.0 + 2.0 * occupation + anomalous);
            out.var_y.set(row, col, 1.0 + 2.0 * occupation - anomalous);
        }
        for (col, &(p, q)) in pairs.iter().enumerate() {
            let (dp, dq) = (p - c, q - c);
            let (jp, jq) = (bessel[slot(dp)], bessel[slot(dq)]);
            let normal = 4.0 * n * decay * (jp.norm_sqr() + jq.norm_sqr());
            let anomalous = match mode {
                EvalMode::Instantaneous => {
                    let prod = jp * jq;
                    let a = aa * carrier * quarter_turns(dp + dq) * prod;
                    let b = adad * carrier_conj * quarter_turns(-(dp + dq)) * prod.conj();
                    -4.0 * (a + b).re
                }
                EvalMode::Envelope => -8.0 * aa.norm() * decay * jp.norm() * jq.norm(),
            };
            out.corr_var.set(row, col, 4.0 + normal + anomalous);
        }
    }
    Ok(out)
}

/// Total photon number in an infinite chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalPhotons {
    /// `n e^{-2 gamma t} I0(2 Im(zeta1 t))`
    pub exact: Vec<f64>,
    /// `n e^{-2 gamma t} (1 + Im(zeta1 t)^2)`
    pub approx: Vec<f64>,
}

pub fn total_photons(
    params: &CrowParams,
    state: &InitialStateMoments,
    times: &[f64],
) -> Result<TotalPhotons> {
    params.validate()?;
    check_times(times)?;
    let mut exact = Vec::with_capacity(times.len());
    let mut approx = Vec::with_capacity(times.len());
    for &t in times {
        let decay = state.n_avg * (-2.0 * params.gamma * t).exp();
        let im = params.zeta1.im * t;
        exact.push(decay * bessel_i0(2.0 * im.abs())?);
        approx.push(decay * (1.0 + im * im));
    }
    Ok(TotalPhotons { exact, approx })
}

/// Time (in units of `tau`) at which the photon number in the cavity `p`
/// sites away peaks, `p + c0 p^(1/3)`. Intended for large `p`.
pub fn arrival_time_estimate(p: u32) -> f64 {
    let p = f64::from(p);
    p + ARRIVAL_C0 * p.cbrt()
}

/// Effective propagation velocity to the cavity `p` sites away as a fraction
/// of the maximum group velocity, `1 - c0 p^(-2/3)`.
pub fn velocity_estimate(p: u32) -> f64 {
    1.0 - ARRIVAL_C0 * f64::from(p).powf(-2.0 / 3.0)
}

/// [`velocity_estimate`] in absolute units, `v_max = period / tau`.
pub fn velocity_estimate_absolute(p: u32, period: f64, tau: f64) -> f64 {
    velocity_estimate(p) * period / tau
}

/// Large-distance peak values in a lossless chain excited with a squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticMaxima {
    /// Peak photon number `c1^2 sinh^2(u) / p^(2/3)`.
    pub n_max: f64,
    /// Deepest squeezing `1 - c1^2 (1 - e^{-2u}) / p^(2/3)`.
    pub var_x_min: f64,
    /// Smallest `Delta^2_{p,-p}`, `4 (1 - c1^2 (1 - e^{-2u}) / p^(2/3))`.
    pub corr_var_min: f64,
}

pub fn asymptotic_maxima(p: u32, u: f64) -> AsymptoticMaxima {
    let weight = airy_constant_c1().powi(2) / f64::from(p).powf(2.0 / 3.0);
    let squeeze = 1.0 - (-2.0 * u).exp();
    AsymptoticMaxima {
        n_max: weight * u.sinh().powi(2),
        var_x_min: 1.0 - weight * squeeze,
        corr_var_min: 4.0 * (1.0 - weight * squeeze),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::svs_moments;

    #[test]
    fn lossless_pair_conserves_photons() {
        let p = TwoCavityParams::new(1.0, 0.05, 0.0).unwrap();
        let s = svs_moments(1.2, 0.0, LEFT).unwrap();
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.77).collect();
        let out = two_cavity_series(&p, &s, &times, EvalMode::Instantaneous).unwrap();
        for r in 0..times.len() {
            let total = out.photon_number.get(r, 0) + out.photon_number.get(r, 1);
            assert!((total - s.n_avg).abs() < 1e-13);
        }
    }

    #[test]
    fn right_cavity_excitation_is_rejected() {
        let p = TwoCavityParams::new(1.0, 0.05, 0.001).unwrap();
        let s = svs_moments(1.2, 0.0, RIGHT).unwrap();
        assert!(matches!(
            two_cavity_series(&p, &s, &[0.0], EvalMode::Envelope),
            Err(Error::Spec(_))
        ));
        assert!(matches!(
            TwoCavityParams::new(0.01, 0.05, 0.0),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn chain_spec_round_trip() {
        let p = TwoCavityParams::new(1.0, 0.05, 0.001).unwrap();
        let q = TwoCavityParams::from_chain_spec(&p.chain_spec()).unwrap();
        assert!((q.omega - 1.0).abs() < 1e-15);
        assert!((q.delta - 0.05).abs() < 1e-15);
        assert!((q.gamma - 0.001).abs() < 1e-15);
    }

    #[test]
    fn crow_initial_values() {
        let spec = CavityChainSpec::nearest_neighbour(
            9,
            Complex64::new(3.8, -1e-3),
            Complex64::new(0.01, -2e-5),
            1.0,
        );
        let params = CrowParams::from_spec(&spec, 0).unwrap();
        let s = svs_moments(0.88, 0.0, 0).unwrap();
        let out = crow_series(
            &params,
            &s,
            &[0.0],
            &[0, 1, -2],
            &[(1, -1)],
            EvalMode::Instantaneous,
        )
        .unwrap();
        assert!((out.photon_number.get(0, 0) - s.n_avg).abs() < 1e-15);
        assert!((out.var_x.get(0, 0) - (-1.76f64).exp()).abs() < 1e-14);
        assert_eq!(out.photon_number.get(0, 1), 0.0);
        assert_eq!(out.var_x.get(0, 2), 1.0);
        assert_eq!(out.corr_var.get(0, 0), 4.0);
    }

    #[test]
    fn mirrored_cavities_match() {
        let spec = CavityChainSpec::nearest_neighbour(
            9,
            Complex64::new(3.8, -1e-3),
            Complex64::new(0.01, -2e-5),
            1.0,
        );
        let params = CrowParams::from_spec(&spec, 0).unwrap();
        let s = svs_moments(0.88, 0.0, 0).unwrap();
        let times: Vec<f64> = (0..100).map(|i| i as f64 * params.tau * 0.2).collect();
        let out = crow_series(
            &params,
            &s,
            &times,
            &[3, -3, 4, -4],
            &[],
            EvalMode::Instantaneous,
        )
        .unwrap();
        for r in 0..times.len() {
            assert_eq!(out.photon_number.get(r, 0), out.photon_number.get(r, 1));
            assert_eq!(out.var_x.get(r, 2), out.var_x.get(r, 3));
        }
    }

    #[test]
    fn total_photons_start_at_n_and_stay_without_loss() {
        let spec = CavityChainSpec::nearest_neighbour(
            9,
            Complex64::new(3.8, 0.0),
            Complex64::new(0.01, 0.0),
            1.0,
        );
        let params = CrowParams::from_spec(&spec, 0).unwrap();
        let s = svs_moments(0.88, 0.0, 0).unwrap();
        let tot = total_photons(&params, &s, &[0.0, 10.0, 1000.0]).unwrap();
        assert!(tot.exact.iter().all(|&x| x == s.n_avg));
        assert!(tot.approx.iter().all(|&x| x == s.n_avg));
    }

    #[test]
    fn estimators() {
        assert!((arrival_time_estimate(27) - 29.4).abs() < 1e-12);
        assert!((arrival_time_estimate(1) - 1.8).abs() < 1e-12);
        assert!((velocity_estimate(8) - 0.8).abs() < 1e-12);
        assert!((velocity_estimate(u32::MAX) - 1.0).abs() < 1e-5);
        assert!((velocity_estimate_absolute(8, 2.0, 4.0) - 0.4).abs() < 1e-12);
        let vac = asymptotic_maxima(10, 0.0);
        assert_eq!(
            (vac.n_max, vac.var_x_min, vac.corr_var_min),
            (0.0, 1.0, 4.0)
        );
        let a = asymptotic_maxima(5, 0.88);
        let b = asymptotic_maxima(40, 0.88);
        assert!((b.n_max / a.n_max - 0.25).abs() < 1e-12);
        assert!(((1.0 - b.var_x_min) / (1.0 - a.var_x_min) - 0.25).abs() < 1e-12);
        assert!(((4.0 - b.corr_var_min) / (4.0 - a.corr_var_min) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(quarter_turns(0), Complex64::new(1.0, 0.0));
        assert_eq!(quarter_turns(-1), Complex64::new(0.0, -1.0));
        assert_eq!(quarter_turns(6), Complex64::new(-1.0, 0.0));
        let v = [1i64, 5, -3];
        assert!(v
            .iter()
            .all(|&k| quarter_turns(k) == Complex64::new(0.0, 1.0)));
    }
}
