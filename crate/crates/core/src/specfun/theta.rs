//! Third Jacobi theta function for real argument and real nome.
//!
//! theta3(z, q) = 1 + 2 sum q^{n^2} cos(2 n z). With q = exp(-s) the
//! imaginary transformation gives
//! theta3(z, e^{-s}) = sqrt(pi/s) sum_m exp(-(z - pi m)^2 / s),
//! which converges fast as q -> 1.

use std::f64::consts::PI;

const CUTOFF: f64 = 1e-17;

/// Direct series at nome q.
pub fn theta3_direct(z: f64, q: f64) -> f64 {
    if q == 0.0 {
        return 1.0;
    }
    let lnq = q.ln();
    let mut sum = 0.0;
    let mut n = 1.0_f64;
    loop {
        let t = (lnq * n * n).exp();
        if t < CUTOFF {
            break;
        }
        sum += t * (2.0 * n * z).cos();
        n += 1.0;
    }
    1.0 + 2.0 * sum
}

/// Direct series parameterised by s = -ln q.
pub(crate) fn theta3_direct_s(z: f64, s: f64) -> f64 {
    let mut sum = 0.0;
    let mut n = 1.0_f64;
    loop {
        let t = (-s * n * n).exp();
        if t < CUTOFF {
            break;
        }
        sum += t * (2.0 * n * z).cos();
        n += 1.0;
    }
    1.0 + 2.0 * sum
}

/// Imaginary-transformed series parameterised by s = -ln q.
pub(crate) fn theta3_modular_s(z: f64, s: f64) -> f64 {
    // sum over images of z nearest the origin first
    let m0 = (z / PI).round();
    let zc = z - PI * m0;
    let mut sum = (-zc * zc / s).exp();
    let mut k = 1.0_f64;
    loop {
        let a = zc - PI * k;
        let b = zc + PI * k;
        let ta = (-a * a / s).exp();
        let tb = (-b * b / s).exp();
        sum += ta + tb;
        if ta + tb <= CUTOFF * sum || k > 1e4 {
            break;
        }
        k += 1.0;
    }
    (PI / s).sqrt() * sum
}

/// Imaginary-transformed evaluation at nome q.
pub fn theta3_modular(z: f64, q: f64) -> f64 {
    theta3_modular_s(z, -q.ln())
}

/// theta3 as a function of s = -ln q, picking the fast representation.
pub(crate) fn theta3_s(z: f64, s: f64) -> f64 {
    // q > 0.9 <=> s < -ln 0.9
    if s < 0.105_360_515_657_826_3 {
        theta3_modular_s(z, s)
    } else {
        theta3_direct_s(z, s)
    }
}
