//! Brute-force reference for S(alpha, beta) with Im alpha > 0.
//!
//! The Helmholtz part alpha e^{ikr}/r decays like e^{-2 pi Im(alpha) r} and
//! is summed sharply. The static part G(r; -k) only decays algebraically,
//! so it is summed with the smooth window erfc((r - 5L)/L)/2, L = radius/11.

use super::BlochMomentum;
use crate::error::{Error, Result};
use crate::greens::greens_static;
use crate::specfun::erfcx_real;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: C64,
    /// Truncation bound: half-radius comparison plus the Helmholtz tail.
    pub bound: f64,
    pub radius: f64,
}

/// Summed Bloch phases of every n with |n|^2 = m, for m <= rmax^2.
fn shell_phases(beta: &[f64], rmax: f64) -> Vec<C64> {
    let d = beta.len();
    let m = rmax.floor() as i64;
    let m2max = (rmax * rmax).floor() as i64;
    let table: Vec<Vec<C64>> = beta
        .iter()
        .map(|&b| {
            (-m..=m)
                .map(|a| C64::from_polar(1.0, -2.0 * PI * b * a as f64))
                .collect()
        })
        .collect();
    let mut out = vec![C64::new(0.0, 0.0); m2max as usize + 1];
    let idx = |a: i64| (a + m) as usize;
    match d {
        1 => {
            for a in -m..=m {
                if a * a <= m2max {
                    out[(a * a) as usize] += table[0][idx(a)];
                }
            }
        }
        2 => {
            for a in -m..=m {
                for b in -m..=m {
                    let n2 = a * a + b * b;
                    if n2 <= m2max {
                        out[n2 as usize] += table[0][idx(a)] * table[1][idx(b)];
                    }
                }
            }
        }
        _ => {
            for a in -m..=m {
                for b in -m..=m {
                    let ab = a * a + b * b;
                    if ab > m2max {
                        continue;
                    }
                    let pab = table[0][idx(a)] * table[1][idx(b)];
                    for c in -m..=m {
                        let n2 = ab + c * c;
                        if n2 <= m2max {
                            out[n2 as usize] += pab * table[2][idx(c)];
                        }
                    }
                }
            }
        }
    }
    out[0] = C64::new(0.0, 0.0);
    out
}

fn windowed_sum(alpha: C64, phases: &[C64], radius: f64) -> Result<C64> {
    let k = 2.0 * PI * alpha;
    let ik = C64::new(0.0, 1.0) * k;
    let l = radius / 11.0;
    let r0 = 5.0 * l;
    let mut sum = C64::new(0.0, 0.0);
    for (m2, &ph) in phases.iter().enumerate().skip(1) {
        if ph == C64::new(0.0, 0.0) {
            continue;
        }
        let r = (m2 as f64).sqrt();
        if r > radius {
            break;
        }
        let x = (r - r0) / l;
        let w = if x < 0.0 {
            1.0 - 0.5 * erfcx_real(-x) * (-x * x).exp()
        } else {
            0.5 * erfcx_real(x) * (-x * x).exp()
        };
        let helm = alpha * (ik * r).exp() / r;
        sum += (w * greens_static(r, k)? + helm) * ph;
    }
    Ok(sum)
}

fn helmholtz_tail(d: usize, alpha: C64, radius: f64) -> f64 {
    let g = 2.0 * PI * alpha.im;
    let e = (-g * radius).exp();
    let shells = match d {
        1 => 2.0 / (g * radius),
        2 => 2.0 * PI / g * (1.0 + 1.0 / radius),
        _ => 4.0 * PI * (radius / g + 1.0 / (g * g)) * (1.0 + 2.0 / radius),
    };
    alpha.norm() * e * shells
}

/// Direct lattice sum to `radius` (lattice units) with a truncation bound.
pub fn direct_sum_oracle(
    d: usize,
    alpha: C64,
    beta: &BlochMomentum,
    radius: f64,
) -> Result<OracleResult> {
    if beta.d() != d {
        return Err(Error::Invalid(format!(
            "Bloch momentum has {} components, d = {d}",
            beta.d()
        )));
    }
    if !(alpha.im > 0.0) {
        return Err(Error::domain("direct_sum_oracle", "requires Im alpha > 0"));
    }
    let min_radius = 5.0 / (2.0 * PI * alpha.im);
    if !(radius >= min_radius) || radius > 400.0 {
        return Err(Error::domain(
            "direct_sum_oracle",
            format!("radius {radius} outside [{min_radius:.3}, 400]"),
        ));
    }
    let phases = shell_phases(beta.components(), radius);
    let full = windowed_sum(alpha, &phases, radius)?;
    let part = windowed_sum(alpha, &phases, 0.75 * radius)?;
    let count: f64 = phases.len() as f64;
    let rounding = 16.0 * f64::EPSILON * count.sqrt() * (1.0 + full.norm());
    Ok(OracleResult {
        value: full,
        bound: (full - part).norm() + helmholtz_tail(d, alpha, radius) + rounding,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latticesum::lattice_sum_1d;

    #[test]
    fn oracle_matches_closed_form_1d() {
        let a = C64::new(0.3, 0.2);
        let b = BlochMomentum::new(&[0.2]).unwrap();
        let o = direct_sum_oracle(1, a, &b, 60.0).unwrap();
        let c = lattice_sum_1d(a, 0.2).unwrap();
        assert!((o.value - c).norm() < 1e-8, "{} vs {c}", o.value);
        assert!((o.value - c).norm() <= o.bound.max(1e-12) * 10.0);
    }

    #[test]
    fn oracle_preconditions() {
        let b = BlochMomentum::new(&[0.2, 0.1]).unwrap();
        assert!(direct_sum_oracle(2, C64::new(0.3, -0.1), &b, 40.0).is_err());
        assert!(direct_sum_oracle(2, C64::new(0.3, 0.1), &b, 2.0).is_err());
        assert!(direct_sum_oracle(3, C64::new(0.3, 0.1), &b, 40.0).is_err());
    }
}
