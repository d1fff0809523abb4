//! Principal-branch log-gamma.
//!
//! Stirling's series at Re z >= 10, reached by the shift
//! ln Gamma(z) = ln Gamma(z + n) - sum_k ln(z + k). A sum of principal
//! logarithms is analytic off the negative real axis and real on the
//! positive one, so the result is the principal branch everywhere.

use num_complex::Complex64 as C64;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

pub(crate) fn ln_gamma_unchecked(z: C64) -> C64 {
    let mut w = z;
    // ln of the shift product: modulus in one log, arguments summed
    let mut prod = C64::new(1.0, 0.0);
    let mut arg = 0.0;
    while w.re < 10.0 || w.norm() < 12.0 {
        prod *= w;
        arg += w.arg();
        w += 1.0;
    }
    let shift = C64::new(prod.norm().ln(), arg);
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift
}

/// Digamma psi(z) = Gamma'(z)/Gamma(z) from the differentiated Stirling series.
pub fn digamma(z: C64) -> C64 {
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < 10.0 || w.norm() < 12.0 {
        shift += 1.0 / w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv2;
    for (k, c) in STIRLING.iter().enumerate() {
        series -= c * (2 * k + 1) as f64 * p;
        p *= inv2;
    }
    w.ln() - 0.5 * inv + series - shift
}
