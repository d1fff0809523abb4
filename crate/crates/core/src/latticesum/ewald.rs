//! Ewald split of the Helmholtz part: real-space shells and reciprocal terms.

use crate::error::{Error, Result};
use crate::specfun::{e1, erfc, erfcx, SQRT_PI};
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// ln(1e18): the envelope below which Ewald terms are dropped.
pub(crate) const ENVELOPE: f64 = 41.446_531_673_892_82;

/// Lattice vectors grouped by |n|^2 with their summed Bloch phases.
#[derive(Debug, Clone)]
pub(crate) struct Shell {
    pub r: f64,
    pub phase: C64,
}

/// Reciprocal vectors grouped by |beta + h|^2.
#[derive(Debug, Clone)]
pub(crate) struct RecipTerm {
    pub q2: f64,
    pub q: f64,
    pub mult: f64,
}

pub(crate) fn real_radius2(eta: f64, re2: f64) -> f64 {
    eta * eta * (PI * PI * eta * eta * re2.max(0.0) + ENVELOPE)
}

pub(crate) fn recip_radius2(eta: f64, re2: f64) -> f64 {
    re2.max(0.0) + ENVELOPE / (PI * PI * eta * eta)
}

/// Calls f(n) for every n in Z^d \ {0} with |n|^2 <= r2max.
pub(crate) fn for_each_lattice_point<F: FnMut(&[i64])>(d: usize, r2max: f64, mut f: F) {
    let m = r2max.sqrt().floor() as i64;
    match d {
        1 => {
            for a in -m..=m {
                if a != 0 && (a * a) as f64 <= r2max {
                    f(&[a]);
                }
            }
        }
        2 => {
            for a in -m..=m {
                for b in -m..=m {
                    let n2 = a * a + b * b;
                    if n2 != 0 && n2 as f64 <= r2max {
                        f(&[a, b]);
                    }
                }
            }
        }
        _ => {
            for a in -m..=m {
                for b in -m..=m {
                    let ab = a * a + b * b;
                    if ab as f64 > r2max {
                        continue;
                    }
                    for c in -m..=m {
                        let n2 = ab + c * c;
                        if n2 != 0 && n2 as f64 <= r2max {
                            f(&[a, b, c]);
                        }
                    }
                }
            }
        }
    }
}

pub(crate) fn build_shells(d: usize, beta: &[f64], r2max: f64) -> Vec<Shell> {
    let mut map: BTreeMap<i64, C64> = BTreeMap::new();
    for_each_lattice_point(d, r2max, |n| {
        let mut dot = 0.0;
        let mut n2 = 0;
        for (ni, bi) in n.iter().zip(beta) {
            dot += bi * *ni as f64;
            n2 += ni * ni;
        }
        *map.entry(n2).or_insert(C64::new(0.0, 0.0)) += C64::from_polar(1.0, -2.0 * PI * dot);
    });
    map.into_iter()
        .map(|(n2, phase)| Shell {
            r: (n2 as f64).sqrt(),
            phase,
        })
        .collect()
}

pub(crate) fn build_recip(d: usize, beta: &[f64], q2max: f64) -> Vec<RecipTerm> {
    let m = q2max.sqrt().ceil() as i64 + 1;
    let mut q2s = Vec::new();
    let mut rec = |h: &[i64]| {
        let q2: f64 = h
            .iter()
            .zip(beta)
            .map(|(hi, bi)| (bi + *hi as f64).powi(2))
            .sum();
        if q2 <= q2max {
            q2s.push(q2);
        }
    };
    match d {
        1 => (-m..=m).for_each(|a| rec(&[a])),
        2 => (-m..=m).for_each(|a| (-m..=m).for_each(|b| rec(&[a, b]))),
        _ => (-m..=m).for_each(|a| (-m..=m).for_each(|b| (-m..=m).for_each(|c| rec(&[a, b, c])))),
    }
    q2s.sort_by(f64::total_cmp);
    let mut out: Vec<RecipTerm> = Vec::new();
    for q2 in q2s {
        match out.last_mut() {
            Some(t) if (q2 - t.q2).abs() <= 1e-15 * q2.max(1e-300) => t.mult += 1.0,
            _ => out.push(RecipTerm {
                q2,
                q: q2.sqrt(),
                mult: 1.0,
            }),
        }
    }
    out
}

/// Real-space part S3r, plus the sum of term magnitudes.
pub(crate) fn real_space(alpha: C64, eta: f64, shells: &[Shell]) -> (C64, f64) {
    let shift = C64::new(0.0, PI * eta) * alpha;
    let g = (PI * eta * alpha) * (PI * eta * alpha);
    let mut sum = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for s in shells {
        let z0 = C64::new(s.r / eta, 0.0);
        let e = (g - s.r * s.r / (eta * eta)).exp();
        let t = e * (erfcx(z0 + shift) + erfcx(z0 - shift)) * s.phase / s.r;
        mag += t.norm();
        sum += t;
    }
    (0.5 * alpha * sum, 0.5 * alpha.norm() * mag)
}

/// Reciprocal-space part S3m including the two alpha-only corrections.
pub(crate) fn reciprocal(
    d: usize,
    alpha: C64,
    eta: f64,
    terms: &[RecipTerm],
) -> Result<(C64, f64)> {
    let pe2 = PI * PI * eta * eta;
    let mut sum = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for t in terms {
        let mut w = t.q2 - alpha * alpha;
        if alpha.im == 0.0 {
            // real alpha: limit from Im alpha > 0
            w.im = if alpha.re > 0.0 { -0.0 } else { 0.0 };
        }
        if w.norm() < 1e-12 {
            return Err(Error::singular(
                "reciprocal sum",
                format!("|beta + h| = {} coincides with alpha = {alpha}", t.q),
            ));
        }
        let crossed = alpha.im < 0.0 && alpha.re.abs() > t.q;
        let term = match d {
            1 => {
                let mut v = e1(pe2 * w);
                if crossed {
                    v += C64::new(0.0, 2.0 * PI * alpha.re.signum());
                }
                alpha * v
            }
            2 => {
                let mut s = if alpha.im == 0.0 && w.re < 0.0 {
                    C64::new(0.0, -(-w.re).sqrt() * alpha.re.signum())
                } else {
                    w.sqrt()
                };
                if crossed {
                    s = -s;
                }
                alpha * erfc(PI * eta * s) / s
            }
            _ => alpha / PI * (-pe2 * w).exp() / w,
        };
        mag += t.mult * term.norm();
        sum += t.mult * term;
    }
    let iy = C64::new(0.0, -PI * eta) * alpha;
    let c1 = -2.0 * alpha / (SQRT_PI * eta) * (pe2 * alpha * alpha).exp();
    let c2 = C64::new(0.0, -2.0 * PI) * alpha * alpha * erfc(iy);
    mag += c1.norm() + c2.norm();
    Ok((sum + c1 + c2, mag))
}
