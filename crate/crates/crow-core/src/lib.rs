//! Squeezed, thermal and coherent states propagating through lossy chains of
//! coupled optical cavities.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`specfun`]: integer-order Bessel `J_n` of complex argument, `I_0`, and the
//!   Airy-derived constant that controls peak amplitudes far down a chain.
//! * [`linalg`]: a small dense complex matrix type with LU and a
//!   Hessenberg/shifted-QR eigensolver.
//! * [`modes`]: quasimode bases (two coupled cavities, periodic Bloch chains,
//!   and arbitrary overlap/coupling matrices).
//! * [`states`]: second moments of the single excited cavity at `t = 0`.
//! * [`general`]: the mode-sum evolution engine, valid for any basis.
//! * [`analytic`]: closed-form two-cavity and Bessel-function chain engines
//!   plus asymptotic estimators.
//!
//! Quantities are complex frequencies `w = Re(w) - i*gamma` in radians per
//! time unit. Observables are returned as an [`ObservableSeries`].
#![no_std]

extern crate alloc;

pub mod analytic;
mod error;
pub mod general;
pub mod linalg;
pub mod modes;
mod series;
pub mod specfun;
pub mod states;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use modes::{CavityChainSpec, ComplexFrequency, QuasimodeBasis};
pub use series::{EvalMode, ObservableSeries, Table};
pub use states::InitialStateMoments;

/// Dimensionless complex number (real and imaginary part).
pub type ComplexScalar = Complex64;
