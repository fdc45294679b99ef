//! Quasimodes of coupled-cavity systems.
//!
//! A coupled-cavity quasimode `m` has complex frequency `w_m` and expands
//! over single-cavity modes with coefficients `v_mq`. Three constructions
//! are provided: the nearest-neighbour two-cavity pair, the periodic Bloch
//! chain, and the general overlap/coupling eigenproblem
//! `A W v = w^2 (A + B) v` with `W = diag(Omega_q^2)`.

use alloc::{format, vec, vec::Vec};
use core::cmp::Ordering;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
// Needed without std; redundant when std is linked elsewhere in the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{eigen, inverse_with_condition, CMatrix};
use crate::{ComplexScalar, Error, Result};

/// Largest condition number of `A + B` accepted by [`solve_generalized_modes`].
pub const MAX_CONDITION: f64 = 1.0e10;

/// Quasimode frequency `w - i*gamma` (`gamma >= 0` for decaying modes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFrequency(pub Complex64);

impl ComplexFrequency {
    pub fn new(omega: f64, gamma: f64) -> Self {
        Self(Complex64::new(omega, -gamma))
    }

    /// Real (oscillation) part.
    pub fn omega(self) -> f64 {
        self.0.re
    }

    /// Amplitude decay rate, `-Im`.
    pub fn gamma(self) -> f64 {
        -self.0.im
    }

    /// Quality factor `Re / (2 |Im|)`.
    pub fn quality_factor(self) -> f64 {
        self.0.re / (2.0 * self.0.im.abs())
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl From<Complex64> for ComplexFrequency {
    fn from(z: Complex64) -> Self {
        Self(z)
    }
}

/// Description of a chain of identical (or, with matrices, arbitrary)
/// coupled cavities.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityChainSpec {
    pub n_cavities: usize,
    /// Single-cavity frequency.
    pub omega0: ComplexFrequency,
    /// Nearest-neighbour coupling (dimensionless).
    pub beta1: ComplexScalar,
    /// Lattice period.
    pub period: f64,
    /// Overlap coefficients `alpha_p = A_{0p}` for `p = 1, 2, ...`.
    pub alphas: Vec<ComplexScalar>,
    /// Coupling coefficients `beta_p = B_{0p}` for `p = 1, 2, ...`. When empty,
    /// `beta1` alone is used.
    pub betas: Vec<ComplexScalar>,
    /// Full overlap matrix `A`.
    pub overlap: Option<CMatrix>,
    /// Full coupling matrix `B`.
    pub coupling: Option<CMatrix>,
    /// Per-cavity frequencies; defaults to `omega0` for every cavity.
    pub cavity_frequencies: Option<Vec<ComplexFrequency>>,
}

impl CavityChainSpec {
    /// Nearest-neighbour chain of `n` identical cavities.
    pub fn nearest_neighbour(
        n_cavities: usize,
        omega0: Complex64,
        beta1: Complex64,
        period: f64,
    ) -> Self {
        Self {
            n_cavities,
            omega0: ComplexFrequency(omega0),
            beta1,
            period,
            alphas: Vec::new(),
            betas: Vec::new(),
            overlap: None,
            coupling: None,
            cavity_frequencies: None,
        }
    }

    /// Chain defined by explicit overlap and coupling matrices.
    pub fn from_matrices(omega0: Complex64, overlap: CMatrix, coupling: CMatrix) -> Result<Self> {
        let n = overlap.rows();
        let spec = Self {
            n_cavities: n,
            omega0: ComplexFrequency(omega0),
            beta1: if n > 1 {
                coupling[(0, 1)]
            } else {
                Complex64::new(0.0, 0.0)
            },
            period: 1.0,
            alphas: Vec::new(),
            betas: Vec::new(),
            overlap: Some(overlap),
            coupling: Some(coupling),
            cavity_frequencies: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the invariants on frequencies and matrix shapes.
    pub fn validate(&self) -> Result<()> {
        let w = self.omega0.0;
        if !(w.re.is_finite()
            && w.im.is_finite()
            && self.beta1.re.is_finite()
            && self.beta1.im.is_finite())
        {
            return Err(Error::Spec(format!(
                "non-finite frequency {w} or coupling {}",
                self.beta1
            )));
        }
        if w.im > 0.0 {
            return Err(Error::Spec(format!(
                "cavity frequency {w} has gain (Im > 0)"
            )));
        }
        if self.n_cavities == 0 {
            return Err(Error::Spec("chain has no cavities".into()));
        }
        for (name, m) in [("overlap", &self.overlap), ("coupling", &self.coupling)] {
            if let Some(m) = m {
                if !m.is_square() || m.rows() != self.n_cavities {
                    return Err(Error::Dimension(format!(
                        "{name} matrix is {}x{}, expected {n}x{n}",
                        m.rows(),
                        m.cols(),
                        n = self.n_cavities
                    )));
                }
            }
        }
        if let Some(f) = &self.cavity_frequencies {
            if f.len() != self.n_cavities {
                return Err(Error::Dimension(format!(
                    "{} cavity frequencies for {} cavities",
                    f.len(),
                    self.n_cavities
                )));
            }
        }
        Ok(())
    }

    /// Complex hopping rate `zeta1 = Omega0 * beta1`.
    pub fn zeta1(&self) -> Complex64 {
        self.omega0.0 * self.beta1
    }

    /// Maximum group velocity `D Re(zeta1)` of the nearest-neighbour band.
    pub fn max_group_velocity(&self) -> f64 {
        self.period * self.zeta1().re
    }

    /// Copy with the imaginary parts of `Omega0` and `beta1` (and of any
    /// matrices or per-cavity frequencies) removed.
    pub fn lossless(&self) -> Self {
        let re = |z: Complex64| Complex64::new(z.re, 0.0);
        Self {
            n_cavities: self.n_cavities,
            omega0: ComplexFrequency(re(self.omega0.0)),
            beta1: re(self.beta1),
            period: self.period,
            alphas: self.alphas.iter().map(|&z| re(z)).collect(),
            betas: self.betas.iter().map(|&z| re(z)).collect(),
            overlap: self.overlap.as_ref().map(|m| m.map(re)),
            coupling: self.coupling.as_ref().map(|m| m.map(re)),
            cavity_frequencies: self
                .cavity_frequencies
                .as_ref()
                .map(|f| f.iter().map(|w| ComplexFrequency(re(w.0))).collect()),
        }
    }

    fn frequencies(&self) -> Vec<Complex64> {
        match &self.cavity_frequencies {
            Some(f) => f.iter().map(|w| w.0).collect(),
            None => vec![self.omega0.0; self.n_cavities],
        }
    }

    fn is_circulant(&self) -> bool {
        let (Some(a), Some(b)) = (&self.overlap, &self.coupling) else {
            return false;
        };
        let n = self.n_cavities;
        let tol = 1e-14;
        let circ = |m: &CMatrix| {
            let scale = m.norm_frobenius().max(1.0);
            (0..n).all(|i| {
                (0..n).all(|j| (m[(i, j)] - m[(0, (j + n - i) % n)]).norm() <= tol * scale)
            })
        };
        let f = self.frequencies();
        circ(a)
            && circ(b)
            && f.iter()
                .all(|w| (w - f[0]).norm() <= tol * f[0].norm().max(1.0))
    }
}

/// Quasimode frequencies and expansion coefficients.
///
/// `coefficients[(m, q)]` is `v_mq`; row `m` is a mode, column `q` a cavity.
/// Column `q` carries the cavity label `first_label + q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasimodeBasis {
    pub frequencies: Vec<ComplexFrequency>,
    pub coefficients: CMatrix,
    pub first_label: i64,
    /// Wavevector per mode for Bloch bases.
    pub wavevectors: Option<Vec<f64>>,
}

impl QuasimodeBasis {
    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn n_cavities(&self) -> usize {
        self.coefficients.cols()
    }

    /// Column index of cavity `label`, if it lies in the chain.
    pub fn column_of(&self, label: i64) -> Option<usize> {
        let idx = label.checked_sub(self.first_label)?;
        usize::try_from(idx).ok().filter(|&i| i < self.n_cavities())
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.n_cavities()).map(move |q| self.first_label + q as i64)
    }

    /// `|A W v_m - w_m^2 (A + B) v_m|_2` for every mode.
    pub fn eigen_residuals(&self, spec: &CavityChainSpec) -> Result<Vec<f64>> {
        let (lhs, rhs) = generalized_pencil(spec)?;
        (0..self.n_modes())
            .map(|m| {
                let v = self.coefficients.row(m);
                let w2 = self.frequencies[m].0 * self.frequencies[m].0;
                let l = lhs.mul_vec(v)?;
                let r = rhs.mul_vec(v)?;
                Ok(l.iter()
                    .zip(&r)
                    .map(|(a, b)| (a - w2 * b).norm_sqr())
                    .sum::<f64>()
                    .sqrt())
            })
            .collect()
    }
}

/// Symmetric and antisymmetric modes of two identical cavities,
/// `w_± = Omega0 (1 ± beta1/2)`, rows `(1, 1)/sqrt2` and `(1, -1)/sqrt2`.
///
/// Cavity labels: left = 0, right = 1.
pub fn two_cavity_modes(spec: &CavityChainSpec) -> Result<QuasimodeBasis> {
    if spec.n_cavities != 2 {
        return Err(Error::Spec(format!(
            "two-cavity modes need 2 cavities, got {}",
            spec.n_cavities
        )));
    }
    spec.validate()?;
    let w0 = spec.omega0.0;
    let half = spec.beta1 * 0.5;
    let plus = w0 * (Complex64::new(1.0, 0.0) + half);
    let minus = w0 * (Complex64::new(1.0, 0.0) - half);
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let coefficients = CMatrix::from_rows(&[vec![s, s], vec![s, -s]])?;
    Ok(QuasimodeBasis {
        frequencies: vec![ComplexFrequency(plus), ComplexFrequency(minus)],
        coefficients,
        first_label: 0,
        wavevectors: None,
    })
}

/// Nearest-neighbour Bloch modes of a periodic chain of `N` cavities:
/// `w(k) = Omega0 (1 - beta1 cos kD)` and `v_kp = e^{ikpD}/sqrt(N)` on the
/// grid `k_j = 2 pi j / (N D)`.
///
/// Cavities are labelled `-(N/2) .. ` so that label 0 sits in the middle
/// (`-(N-1)/2 ..= (N-1)/2` for odd `N`).
pub fn crow_bloch_modes(spec: &CavityChainSpec) -> Result<QuasimodeBasis> {
    let n = spec.n_cavities;
    if n < 2 {
        return Err(Error::Spec(format!(
            "a periodic chain needs at least 2 cavities, got {n}"
        )));
    }
    spec.validate()?;
    if !(spec.period > 0.0 && spec.period.is_finite()) {
        return Err(Error::Spec(format!(
            "lattice period must be positive, got {}",
            spec.period
        )));
    }
    let first_label = -((n / 2) as i64);
    let norm = 1.0 / (n as f64).sqrt();
    let mut frequencies = Vec::with_capacity(n);
    let mut wavevectors = Vec::with_capacity(n);
    let mut coefficients = CMatrix::zeros(n, n);
    for j in 0..n {
        let k = 2.0 * PI * j as f64 / (n as f64 * spec.period);
        wavevectors.push(k);
        frequencies.push(nntb_dispersion(spec, k));
        for q in 0..n {
            let label = first_label + q as i64;
            // Reduce the integer phase index mod n before converting to an angle.
            let idx = (j as i64 * label).rem_euclid(n as i64);
            let phase = 2.0 * PI * idx as f64 / n as f64;
            coefficients[(j, q)] = Complex64::from_polar(norm, phase);
        }
    }
    Ok(QuasimodeBasis {
        frequencies,
        coefficients,
        first_label,
        wavevectors: Some(wavevectors),
    })
}

/// `Omega0 (1 - beta1 cos kD)`.
pub fn nntb_dispersion(spec: &CavityChainSpec, k: f64) -> ComplexFrequency {
    let c = (k * spec.period).cos();
    ComplexFrequency(spec.omega0.0 * (Complex64::new(1.0, 0.0) - spec.beta1 * c))
}

/// Tight-binding dispersion with overlap and coupling coefficients,
/// `w(k) = Omega0 sqrt[(1 + 2 sum cos(kpD) alpha_p) / (1 + 2 sum cos(kpD)(alpha_p + beta_p))]`
/// on the principal branch.
///
/// Coefficient lists come from `spec.alphas`/`spec.betas`; an empty `betas`
/// list means `[beta1]`. Missing entries count as zero.
pub fn full_dispersion(spec: &CavityChainSpec, k: f64) -> Result<ComplexFrequency> {
    let betas: Vec<Complex64> = if spec.betas.is_empty() {
        vec![spec.beta1]
    } else {
        spec.betas.clone()
    };
    let range = spec.alphas.len().max(betas.len());
    let zero = Complex64::new(0.0, 0.0);
    let mut num = Complex64::new(1.0, 0.0);
    let mut den = Complex64::new(1.0, 0.0);
    for p in 1..=range {
        let c = 2.0 * (k * p as f64 * spec.period).cos();
        let a = spec.alphas.get(p - 1).copied().unwrap_or(zero);
        let b = betas.get(p - 1).copied().unwrap_or(zero);
        num += a * c;
        den += (a + b) * c;
    }
    if den.norm() < 1e-12 {
        return Err(Error::Domain(format!(
            "dispersion denominator vanishes at k = {k}"
        )));
    }
    Ok(ComplexFrequency(spec.omega0.0 * (num / den).sqrt()))
}

/// The matrices `(A W, A + B)` of the generalized eigenproblem.
fn generalized_pencil(spec: &CavityChainSpec) -> Result<(CMatrix, CMatrix)> {
    let (Some(a), Some(b)) = (&spec.overlap, &spec.coupling) else {
        return Err(Error::Spec(
            "generalized modes need both overlap and coupling matrices".into(),
        ));
    };
    spec.validate()?;
    let w2: Vec<Complex64> = spec.frequencies().iter().map(|w| w * w).collect();
    let lhs = a.matmul(&CMatrix::diagonal(&w2))?;
    let rhs = a.add(b)?;
    Ok((lhs, rhs))
}

/// Solves `A W v = w^2 (A + B) v` for arbitrary overlap/coupling matrices.
///
/// The pencil is reduced to `M v = w^2 v` with `M = (A + B)^{-1} A W`.
/// Frequencies take the root with `Re w > 0`; modes are sorted by `Re w`;
/// each coefficient row has unit norm with its largest entry real-positive.
/// For circulant inputs, repeated eigenvalues are split along eigenvectors
/// of the cyclic shift, giving Bloch-form rows.
pub fn solve_generalized_modes(spec: &CavityChainSpec) -> Result<QuasimodeBasis> {
    let (lhs, rhs) = generalized_pencil(spec)?;
    let n = spec.n_cavities;
    let (rhs_inv, cond) = inverse_with_condition(&rhs)?;
    if cond > MAX_CONDITION {
        return Err(Error::SingularMatrix { condition: cond });
    }
    let m = rhs_inv.matmul(&lhs)?;
    let eig = eigen(&m)?;
    let mut values = eig.values.clone();
    let mut vectors: Vec<Vec<Complex64>> = (0..n).map(|k| eig.vectors.column(k)).collect();

    if spec.is_circulant() {
        split_by_translation(&m, &mut values, &mut vectors)?;
    }

    let scale = values
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut modes: Vec<(ComplexFrequency, Vec<Complex64>)> = values
        .into_iter()
        .zip(vectors)
        .map(|(lambda, v)| (ComplexFrequency(physical_root(lambda, scale)), fix_phase(v)))
        .collect();
    modes.sort_by(|a, b| {
        a.0 .0
            .re
            .partial_cmp(&b.0 .0.re)
            .unwrap_or(Ordering::Equal)
            .then(a.0 .0.im.partial_cmp(&b.0 .0.im).unwrap_or(Ordering::Equal))
    });

    let mut coefficients = CMatrix::zeros(n, n);
    for (m, (_, v)) in modes.iter().enumerate() {
        for (q, x) in v.iter().enumerate() {
            coefficients[(m, q)] = *x;
        }
    }
    Ok(QuasimodeBasis {
        frequencies: modes.into_iter().map(|(w, _)| w).collect(),
        coefficients,
        first_label: 0,
        wavevectors: None,
    })
}

/// Square root with `Re > 0`; an imaginary part of rounding size is zeroed
/// so that decaying or lossless modes satisfy `Im <= 0`.
fn physical_root(lambda: Complex64, scale: f64) -> Complex64 {
    let mut w = lambda.sqrt();
    if w.re < 0.0 {
        w = -w;
    }
    if w.im > 0.0 && w.im <= 1e-12 * scale.sqrt() {
        w.im = 0.0;
    }
    w
}

fn fix_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .find(|z| z.norm() >= max * (1.0 - 1e-9))
        .copied()
        .unwrap_or(v[0]);
    let rot = pivot.conj() / (pivot.norm() * norm);
    for z in &mut v {
        *z *= rot;
    }
    v
}

/// Within clusters of repeated eigenvalues, re-expresses the eigenvectors
/// as eigenvectors of the cyclic shift `(S v)_q = v_{q+1}`, which commutes
/// with every circulant matrix.
fn split_by_translation(
    m: &CMatrix,
    values: &mut [Complex64],
    vectors: &mut [Vec<Complex64>],
) -> Result<()> {
    let n = values.len();
    let scale = values
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let tol = 1e-9 * scale;
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let cluster: Vec<usize> = (i..n)
            .filter(|&j| !assigned[j] && (values[j] - values[i]).norm() <= tol)
            .collect();
        for &j in &cluster {
            assigned[j] = true;
        }
        if cluster.len() < 2 {
            continue;
        }
        let d = cluster.len();
        let basis = CMatrix::from_fn(n, d, |q, c| vectors[cluster[c]][q]);
        let shifted = CMatrix::from_fn(n, d, |q, c| vectors[cluster[c]][(q + 1) % n]);
        // Least-squares restriction C = (V^H V)^{-1} V^H S V.
        let vh = basis.adjoint();
        let (gram_inv, _) = inverse_with_condition(&vh.matmul(&basis)?)?;
        let restricted = gram_inv.matmul(&vh.matmul(&shifted)?)?;
        let small = eigen(&restricted)?;
        let rotated = basis.matmul(&small.vectors)?;
        for (c, &j) in cluster.iter().enumerate() {
            let v = rotated.column(c);
            let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let mv = m.mul_vec(&v)?;
            let rayleigh: Complex64 = v
                .iter()
                .zip(&mv)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                / norm2;
            values[j] = rayleigh;
            vectors[j] = v;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ring(n: usize, beta: Complex64) -> CavityChainSpec {
        let b = CMatrix::from_fn(n, n, |i, j| {
            let d = (i + n - j) % n;
            if d == 1 || d == n - 1 {
                beta
            } else {
                c(0.0, 0.0)
            }
        });
        let mut spec =
            CavityChainSpec::from_matrices(c(1.0, -0.001), CMatrix::identity(n), b).unwrap();
        spec.beta1 = beta;
        spec
    }

    #[test]
    fn two_cavity_zero_coupling_is_degenerate() {
        let spec = CavityChainSpec::nearest_neighbour(2, c(1.0, -0.001), c(0.0, 0.0), 1.0);
        let b = two_cavity_modes(&spec).unwrap();
        assert_eq!(b.frequencies[0], b.frequencies[1]);
        assert_eq!(b.frequencies[0].0, c(1.0, -0.001));
    }

    #[test]
    fn two_cavity_splitting() {
        let spec = CavityChainSpec::nearest_neighbour(2, c(1.0, -0.001), c(0.1, 0.0), 1.0);
        let b = two_cavity_modes(&spec).unwrap();
        assert!((b.frequencies[0].0 - c(1.0, -0.001) * 1.05).norm() < 1e-15);
        assert!((b.frequencies[1].0 - c(1.0, -0.001) * 0.95).norm() < 1e-15);
        let s = FRAC_1_SQRT_2;
        assert_eq!(b.coefficients.row(0), &[c(s, 0.0), c(s, 0.0)]);
        assert_eq!(b.coefficients.row(1), &[c(s, 0.0), c(-s, 0.0)]);
    }

    #[test]
    fn two_cavity_rejects_other_sizes() {
        let spec = CavityChainSpec::nearest_neighbour(3, c(1.0, 0.0), c(0.1, 0.0), 1.0);
        assert!(matches!(two_cavity_modes(&spec), Err(Error::Spec(_))));
    }

    #[test]
    fn bloch_band_edges() {
        let spec = CavityChainSpec::nearest_neighbour(8, c(2.0, -0.01), c(0.01, -0.0002), 1.0);
        let b = crow_bloch_modes(&spec).unwrap();
        let one = c(1.0, 0.0);
        assert!((b.frequencies[0].0 - spec.omega0.0 * (one - spec.beta1)).norm() < 1e-15);
        assert!((b.frequencies[4].0 - spec.omega0.0 * (one + spec.beta1)).norm() < 1e-15);
        assert_eq!(b.first_label, -4);
        for m in 0..8 {
            for q in 0..8 {
                assert!((b.coefficients[(m, q)].norm() - 1.0 / 8f64.sqrt()).abs() < 1e-15);
            }
        }
        assert!(matches!(
            crow_bloch_modes(&CavityChainSpec::nearest_neighbour(1, one, one, 1.0)),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn dispersion_uncoupled_and_periodic() {
        let mut spec = CavityChainSpec::nearest_neighbour(5, c(1.3, -0.02), c(0.0, 0.0), 2.0);
        assert_eq!(full_dispersion(&spec, 0.7).unwrap().0, spec.omega0.0);
        spec.beta1 = c(0.02, -0.001);
        spec.alphas = vec![c(0.003, 0.0)];
        let k = 0.37;
        let a = full_dispersion(&spec, k).unwrap().0;
        let b = full_dispersion(&spec, k + 2.0 * PI / spec.period)
            .unwrap()
            .0;
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn dispersion_pole_is_a_domain_error() {
        let spec = CavityChainSpec::nearest_neighbour(5, c(1.0, 0.0), c(-0.5, 0.0), 1.0);
        assert!(matches!(full_dispersion(&spec, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn decoupled_generalized_problem() {
        let n = 4;
        let spec = CavityChainSpec::from_matrices(
            c(1.5, -0.01),
            CMatrix::identity(n),
            CMatrix::zeros(n, n),
        )
        .unwrap();
        let b = solve_generalized_modes(&spec).unwrap();
        for w in &b.frequencies {
            assert!((w.0 - c(1.5, -0.01)).norm() < 1e-14);
        }
    }

    #[test]
    fn ring_has_bloch_form() {
        let spec = ring(8, c(0.05, -0.001));
        let b = solve_generalized_modes(&spec).unwrap();
        let res = b.eigen_residuals(&spec).unwrap();
        assert!(res.iter().all(|&r| r < 1e-12), "{res:?}");
        for m in 0..8 {
            for q in 0..8 {
                assert!((b.coefficients[(m, q)].norm() - 1.0 / 8f64.sqrt()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn singular_pencil_is_reported() {
        let n = 2;
        let a = CMatrix::identity(n);
        let b = CMatrix::from_rows(&[
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let spec = CavityChainSpec::from_matrices(c(1.0, 0.0), a, b).unwrap();
        assert!(matches!(
            solve_generalized_modes(&spec),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn mismatched_matrices_are_rejected() {
        let err =
            CavityChainSpec::from_matrices(c(1.0, 0.0), CMatrix::identity(3), CMatrix::zeros(2, 2));
        assert!(matches!(err, Err(Error::Dimension(_))));
    }

    #[test]
    fn gain_is_rejected() {
        let spec = CavityChainSpec::nearest_neighbour(2, c(1.0, 0.01), c(0.1, 0.0), 1.0);
        assert!(matches!(two_cavity_modes(&spec), Err(Error::Spec(_))));
    }
}
