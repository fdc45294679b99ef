//! Special functions used by the closed-form chain engine.
//!
//! Only what the engines need: `J_n(z)` for integer `n` and complex `z`,
//! `I_0(x)` for real `x`, and the constant `c1` giving the peak height of
//! `J_p` for large `p`.

use alloc::format;

use num_complex::Complex64;
// Needed without std; redundant when std is linked elsewhere in the build.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Largest supported Bessel order.
pub const MAX_ORDER: u32 = 512;
/// Largest supported `|z|`.
pub const MAX_ABS_ARG: f64 = 1.0e4;
/// Arguments whose imaginary part exceeds this overflow `J_n` (growth `e^|Im z|`).
const MAX_ABS_IMAG: f64 = 700.0;
/// Largest `I_0` argument; beyond this the result overflows an `f64`.
pub const MAX_I0_ARG: f64 = 700.0;

/// Below this modulus the ascending series is used; above it, Miller's
/// backward recurrence.
const SERIES_RADIUS: f64 = 2.0;

/// `c0` in the large-`p` arrival-time law `t_p/tau ~ p + c0 p^(1/3)`.
///
/// Equals `2^(-1/3) |a'_1|` where `a'_1 = -1.01879...` is the first zero
/// of `Ai'`; conventionally rounded to 0.8.
pub const ARRIVAL_C0: f64 = 0.8;

/// `c1 = 2^(1/3) Ai(a'_1)`, the maximum of `2^(1/3) Ai` (`~0.67`).
const AIRY_C1: f64 = 0.674_885_096_430_477_5;

/// Returns the constant `c1 ~ 0.675` governing `max_x J_p(x) ~ c1 p^(-1/3)`.
pub fn airy_constant_c1() -> f64 {
    AIRY_C1
}

/// Bessel function of the first kind `J_n(z)` for integer `n >= 0` and complex `z`.
///
/// Small arguments use the ascending series; otherwise Miller's backward
/// recurrence normalised with the Jacobi-Anger identity
/// `e^{iz} = J_0(z) + 2 sum_k i^k J_k(z)` (or its mirror `e^{-iz}` when
/// `Im z > 0`), which is free of cancellation for complex `z`.
pub fn bessel_j(n: u32, z: Complex64) -> Result<Complex64> {
    check_args(n, z)?;
    let r = z.norm();
    if r == 0.0 {
        return Ok(if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    if r <= SERIES_RADIUS {
        Ok(ascending_series(n, z))
    } else {
        Ok(miller(n, z))
    }
}

/// `J_n(z)` for any integer order using `J_{-n} = (-1)^n J_n`.
pub fn bessel_j_signed(n: i64, z: Complex64) -> Result<Complex64> {
    let order = u32::try_from(n.unsigned_abs())
        .map_err(|_| Error::Domain(format!("Bessel order {n} out of range")))?;
    let j = bessel_j(order, z)?;
    Ok(if n < 0 && order % 2 == 1 { -j } else { j })
}

/// Modified Bessel function `I_0(x)` for `0 <= x <= 700`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "I0 argument must be finite and >= 0, got {x}"
        )));
    }
    if x > MAX_I0_ARG {
        return Err(Error::Domain(format!(
            "I0({x}) overflows; supported range is x <= {MAX_I0_ARG}"
        )));
    }
    // Positive terms: no cancellation, relative error ~ (number of terms) * eps.
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        k += 1.0;
    }
    Ok(sum)
}

fn check_args(n: u32, z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite, got {z}"
        )));
    }
    if n > MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {n} exceeds {MAX_ORDER}"
        )));
    }
    if z.norm() > MAX_ABS_ARG {
        return Err(Error::Domain(format!(
            "|z| = {} exceeds {MAX_ABS_ARG}",
            z.norm()
        )));
    }
    if z.im.abs() > MAX_ABS_IMAG {
        return Err(Error::Domain(format!(
            "|Im z| = {} overflows J_n; supported up to {MAX_ABS_IMAG}",
            z.im.abs()
        )));
    }
    Ok(())
}

/// `sum_k (-z^2/4)^k / (k! (n+k)!) * (z/2)^n`.
fn ascending_series(n: u32, z: Complex64) -> Complex64 {
    let half = z * 0.5;
    // (z/2)^n / n!, built incrementally to stay in range.
    let mut lead = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        lead = lead * half / f64::from(k);
    }
    if lead.norm() == 0.0 {
        return lead;
    }
    let q = -half * half;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let nf = f64::from(n);
    let mut k = 1.0;
    loop {
        term = term * q / (k * (nf + k));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    lead * sum
}

fn miller(n: u32, z: Complex64) -> Complex64 {
    let r = z.norm();
    let top = f64::from(n).max(r.ceil());
    // Past the turning point J_m decays like an Airy tail; this margin drives
    // J_start / J_max well below machine precision.
    let start = (top + 20.0 + 16.0 * (0.5 * r).cbrt()).ceil() as u32;

    let two_over_z = Complex64::new(2.0, 0.0) / z;
    // Pick e^{+iz} when Im z <= 0 so that |e^{iz}| = e^{|Im z|}.
    let unit = if z.im <= 0.0 {
        Complex64::i()
    } else {
        -Complex64::i()
    };

    let mut next = Complex64::new(0.0, 0.0); // f_{k+1}
    let mut cur = Complex64::new(1e-300, 0.0); // f_k
    let mut target = Complex64::new(0.0, 0.0);
    // sum_{k>=1} 2 (±i)^k f_k, accumulated as k decreases.
    let mut norm = Complex64::new(0.0, 0.0);
    let mut phase = unit.powu(start);
    let unit_inv = unit.conj();

    let mut k = start;
    loop {
        if k == n {
            target = cur;
        }
        if k == 0 {
            break;
        }
        norm += phase * cur * 2.0;
        phase *= unit_inv;
        let prev = two_over_z * f64::from(k) * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        let mag = cur.norm();
        if mag > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            target *= s;
        }
    }
    // f_0 carries phase i^0.
    norm += cur;
    // Complex division squares the modulus; bring both to unit scale first.
    let scale = norm.norm();
    let exp_iz = (unit * z).exp();
    (target / scale) / (norm / scale) * exp_iz
}
