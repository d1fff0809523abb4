//! Pole approximation, collective decay rates and resonance loci.

use super::{gamma0, solve::ComplexEnergy, ModelParams, PoleEquation};
use crate::error::{Error, Result};
use crate::latticesum::{BlochMomentum, LatticeSum};
use log::info;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

fn pole_from_sum(sum: &LatticeSum, p: &ModelParams) -> Result<ComplexEnergy> {
    let a0 = C64::new(p.alpha0, 0.0);
    let s = sum.eval(a0)?;
    let alpha = a0 - C64::new(0.0, 2.0 * PI * p.kappa * p.alpha0 * p.alpha0) - p.kappa * s;
    Ok(ComplexEnergy {
        alpha,
        residual: f64::NAN,
        last_step: f64::NAN,
    })
}

/// First-order-in-kappa band energy alpha0 - 2 pi i kappa alpha0^2 - kappa S(alpha0, beta).
/// `residual` and `last_step` are NaN: this is not a solver result.
pub fn pole_approximation(beta: &BlochMomentum, p: &ModelParams) -> Result<ComplexEnergy> {
    p.validate()?;
    let eq = PoleEquation::new(beta, p)?;
    pole_from_sum(eq.lattice_sum(), p)
}

/// Closed-form 1D decay rate, equal to |Im| of the 1D pole approximation.
pub fn decay_rate_1d(beta: f64, p: &ModelParams) -> f64 {
    let a0 = p.alpha0;
    let term = |x: f64| {
        let s = (2.0 * PI * x).sin();
        let sgn = if s > 0.0 {
            1.0
        } else if s < 0.0 {
            -1.0
        } else {
            0.0
        };
        sgn * (x.rem_euclid(1.0) - 0.5).abs()
    };
    2.0 * PI * p.kappa * a0 * a0 + PI * p.kappa * a0 * (term(a0 + beta) + term(a0 - beta))
}

/// A radiation locus alpha0 = |beta + h| and the number of h sharing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resonance {
    pub alpha0: f64,
    pub multiplicity: usize,
}

/// Distinct |beta + h| over h in Z^d, up to `max_alpha`.
pub fn lattice_resonances(beta: &BlochMomentum, max_alpha: f64) -> Vec<Resonance> {
    let c = beta.components();
    let m = max_alpha.ceil() as i64 + 1;
    let mut q: Vec<f64> = Vec::new();
    let mut h = vec![-m; c.len()];
    loop {
        let q2: f64 = c
            .iter()
            .zip(&h)
            .map(|(b, hi)| (b + *hi as f64).powi(2))
            .sum();
        let v = q2.sqrt();
        if v <= max_alpha && v > 0.0 {
            q.push(v);
        }
        let mut i = 0;
        while i < h.len() {
            h[i] += 1;
            if h[i] <= m {
                break;
            }
            h[i] = -m;
            i += 1;
        }
        if i == h.len() {
            break;
        }
    }
    q.sort_by(f64::total_cmp);
    let mut out: Vec<Resonance> = Vec::new();
    for v in q {
        match out.last_mut() {
            Some(r) if (v - r.alpha0).abs() < 1e-12 => r.multiplicity += 1,
            _ => out.push(Resonance {
                alpha0: v,
                multiplicity: 1,
            }),
        }
    }
    out
}

/// Bragg condition alpha0 = (m/2) C for m = 1..=m_max with C = 1 (X), sqrt 2 (M),
/// sqrt 3 (R). At Γ the distinct |h| with 0 < |h| <= m_max are returned.
pub fn bragg_resonances(point: &str, m_max: usize) -> Result<Vec<f64>> {
    let c = match point.trim().to_ascii_uppercase().as_str() {
        "X" => 1.0,
        "M" => 2f64.sqrt(),
        "R" => 3f64.sqrt(),
        "G" | "GAMMA" => 0.0,
        _ if point.trim() == "Γ" => 0.0,
        _ => {
            return Err(Error::Invalid(format!(
                "unknown high-symmetry point '{point}'"
            )))
        }
    };
    if c == 0.0 {
        let zero = BlochMomentum::new(&[0.0; 3])?;
        return Ok(lattice_resonances(&zero, m_max as f64)
            .iter()
            .map(|r| r.alpha0)
            .collect());
    }
    Ok((1..=m_max).map(|m| 0.5 * m as f64 * c).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub alpha0: f64,
    /// Gamma/Gamma0 from the pole approximation; absent on a singular point.
    pub ratio: Option<f64>,
}

/// Decay rate of one Bloch mode versus lattice spacing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayScan {
    pub beta: Vec<f64>,
    pub rows: Vec<DecayRow>,
    /// Loci |beta + h| inside the scanned range. In 3D the decay rate
    /// vanishes off these points.
    pub resonances: Vec<Resonance>,
}

impl DecayScan {
    /// Interior local maxima of Gamma/Gamma0 above rounding level. A row next
    /// to a skipped singular point counts as a maximum when it exceeds 1.
    pub fn peaks(&self) -> Vec<f64> {
        const FLOOR: f64 = 1e-6;
        let r = &self.rows;
        (1..r.len().saturating_sub(1))
            .filter_map(|i| match (r[i - 1].ratio, r[i].ratio, r[i + 1].ratio) {
                (Some(a), Some(b), Some(c)) if b > a && b >= c && b > FLOOR => Some(r[i].alpha0),
                (None, Some(b), Some(c)) if b >= c && b > 1.0 => Some(r[i].alpha0),
                _ => None,
            })
            .collect()
    }

    /// alpha0 values where Gamma/Gamma0 crosses `level`, linearly interpolated.
    /// A change of side across skipped singular rows is placed at their midpoint.
    pub fn crossings(&self, level: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut last: Option<(usize, f64)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let Some(v) = row.ratio else { continue };
            if let Some((j, u)) = last {
                if (u - level) * (v - level) < 0.0 {
                    let (x0, x1) = (self.rows[j].alpha0, row.alpha0);
                    if i == j + 1 {
                        out.push(x0 + (level - u) / (v - u) * (x1 - x0));
                    } else {
                        out.push(0.5 * (self.rows[j + 1].alpha0 + self.rows[i - 1].alpha0));
                    }
                }
            }
            last = Some((i, v));
        }
        out
    }

    /// First alpha0 at which Gamma/Gamma0 exceeds `threshold`.
    pub fn activation(&self, threshold: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.ratio.is_some_and(|x| x > threshold))
            .map(|r| r.alpha0)
    }
}

/// Gamma/Gamma0 = |Im alpha_pole| / (2 pi kappa alpha0^2) over a grid of alpha0.
pub fn decay_vs_spacing(
    beta: &BlochMomentum,
    alpha0: &[f64],
    p: &ModelParams,
) -> Result<DecayScan> {
    p.validate()?;
    if beta.d() != p.d {
        return Err(Error::Invalid(format!(
            "beta has {} components, d = {}",
            beta.d(),
            p.d
        )));
    }
    let sum = LatticeSum::new(p.d, beta, &p.ewald)?;
    let mut rows = Vec::with_capacity(alpha0.len());
    for &a in alpha0 {
        if !(a > 0.0) {
            return Err(Error::Invalid(format!("alpha0 = {a} must be positive")));
        }
        let q = p.with_alpha0(a);
        let ratio = match pole_from_sum(&sum, &q) {
            Ok(e) => Some(e.alpha.im.abs() / gamma0(&q)),
            Err(e) if e.is_singularity() => {
                info!("alpha0 = {a}: skipped ({e})");
                None
            }
            Err(e) => return Err(e),
        };
        rows.push(DecayRow { alpha0: a, ratio });
    }
    let (lo, hi) = alpha0
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    let resonances = lattice_resonances(&beta.reduced(), hi)
        .into_iter()
        .filter(|r| r.alpha0 >= lo)
        .collect();
    Ok(DecayScan {
        beta: beta.components().to_vec(),
        rows,
        resonances,
    })
}
