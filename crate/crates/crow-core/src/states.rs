//! Second moments of the excited cavity at `t = 0`.
//!
//! Every observable computed by the engines depends on the initial state
//! only through `<a^dag a>`, `<a a>` and `<a^dag a^dag>` of the single excited
//! cavity; all other cavities start in vacuum.

use alloc::format;

use num_complex::Complex64;
// Needed without std; redundant when std is linked elsewhere in the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{ComplexScalar, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateMoments {
    /// `<a^dag_c a_c>`
    pub n_avg: f64,
    /// `<a_c a_c>`
    pub anom: ComplexScalar,
    /// `<a^dag_c a^dag_c>`, always `conj(anom)`.
    pub anom_conj: ComplexScalar,
    /// Label of the excited cavity.
    pub excited_index: i64,
}

impl InitialStateMoments {
    fn new(n_avg: f64, anom: Complex64, excited_index: i64) -> Self {
        Self {
            n_avg,
            anom,
            anom_conj: anom.conj(),
            excited_index,
        }
    }

    /// Vacuum in every cavity.
    pub fn vacuum(excited_index: i64) -> Self {
        Self::new(0.0, Complex64::new(0.0, 0.0), excited_index)
    }

    /// `|<aa>| <= sqrt(n (n + 1))`, the Gaussian positivity bound.
    pub fn is_physical(&self) -> bool {
        self.anom.norm() <= (self.n_avg * (self.n_avg + 1.0)).sqrt() + 1e-12
    }

    /// `<(Delta X)^2>` of the excited cavity at `t = 0`.
    pub fn initial_var_x(&self) -> f64 {
        1.0 + 2.0 * self.n_avg + 2.0 * self.anom.re
    }

    /// Copy relabelled to a different excited cavity.
    pub fn at_cavity(mut self, excited_index: i64) -> Self {
        self.excited_index = excited_index;
        self
    }
}

/// Squeezed vacuum with amplitude `u` and phase `phi`.
pub fn svs_moments(u: f64, phi: f64, c: i64) -> Result<InitialStateMoments> {
    check_finite(&[u, phi])?;
    if u < 0.0 {
        return Err(Error::Domain(format!(
            "squeezing amplitude must be >= 0, got {u}"
        )));
    }
    let (s, ch) = (u.sinh(), u.cosh());
    let anom = -Complex64::from_polar(ch * s, phi);
    Ok(InitialStateMoments::new(s * s, anom, c))
}

/// Squeezed thermal state with `n_th` thermal photons.
pub fn sts_moments(u: f64, phi: f64, n_th: f64, c: i64) -> Result<InitialStateMoments> {
    check_finite(&[u, phi, n_th])?;
    if u < 0.0 || n_th < 0.0 {
        return Err(Error::Domain(format!(
            "need u >= 0 and n_th >= 0, got u = {u}, n_th = {n_th}"
        )));
    }
    if n_th == 0.0 {
        return svs_moments(u, phi, c);
    }
    let s = u.sinh();
    let n_avg = n_th * (2.0 * u).cosh() + s * s;
    let anom = -Complex64::from_polar((n_th + 0.5) * (2.0 * u).sinh(), phi);
    Ok(InitialStateMoments::new(n_avg, anom, c))
}

/// Coherent state `|eta>`.
///
/// The moments are raw second moments: the engines then report
/// `<X^2>` rather than a mean-subtracted variance for this state.
pub fn coherent_moments(eta: Complex64, c: i64) -> Result<InitialStateMoments> {
    check_finite(&[eta.re, eta.im])?;
    Ok(InitialStateMoments::new(eta.norm_sqr(), eta * eta, c))
}

fn check_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().find(|x| !x.is_finite()) {
        Some(x) => Err(Error::Domain(format!(
            "state parameter must be finite, got {x}"
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svs_vacuum_and_values() {
        let v = svs_moments(0.0, 0.3, 0).unwrap();
        assert_eq!(v.n_avg, 0.0);
        assert_eq!(v.anom.norm(), 0.0);

        let s = svs_moments(1.2, 0.0, 0).unwrap();
        assert_eq!(s.n_avg, 1.2f64.sinh().powi(2));
        assert_eq!(s.anom, Complex64::new(-1.2f64.cosh() * 1.2f64.sinh(), 0.0));

        let p = svs_moments(0.88, 0.0, 0).unwrap();
        assert!((p.n_avg - 0.99).abs() < 0.01);
        assert!(matches!(svs_moments(-0.1, 0.0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn svs_saturates_positivity_and_squeezes() {
        for &u in &[0.1, 0.88, 1.2, 3.0] {
            let s = svs_moments(u, 0.0, 0).unwrap();
            let bound = s.n_avg * (s.n_avg + 1.0);
            assert!((s.anom.norm_sqr() - bound).abs() <= 1e-12 * bound.max(1.0));
            assert!((s.initial_var_x() - (-2.0 * u).exp()).abs() < 1e-12 * (2.0 * u).exp());
        }
    }

    #[test]
    fn sts_limits() {
        let a = sts_moments(0.7, 0.4, 0.0, 3).unwrap();
        assert_eq!(a, svs_moments(0.7, 0.4, 3).unwrap());
        let t = sts_moments(0.0, 0.0, 2.0, 0).unwrap();
        assert_eq!((t.n_avg, t.anom.norm()), (2.0, 0.0));
        let m = sts_moments(0.5, 0.0, 1.0, 0).unwrap();
        assert!((m.n_avg - (1f64.cosh() + 0.5f64.sinh().powi(2))).abs() < 1e-15);
        assert!(m.is_physical());
        assert!(matches!(
            sts_moments(0.5, 0.0, -1.0, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coherent_values() {
        let a = coherent_moments(Complex64::new(0.0, 2.0), 0).unwrap();
        assert_eq!((a.n_avg, a.anom), (4.0, Complex64::new(-4.0, 0.0)));
        let b = coherent_moments(Complex64::new(1.0, 1.0), 0).unwrap();
        assert_eq!((b.n_avg, b.anom), (2.0, Complex64::new(0.0, 2.0)));
        assert_eq!(
            coherent_moments(Complex64::new(0.0, 0.0), 1).unwrap(),
            InitialStateMoments::vacuum(1)
        );
    }
}
