//! Quadrature rules: a fixed tanh-sinh rule with a nested error estimate and
//! an adaptive Gauss-Kronrod (7, 15) fallback.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_2;

const TANH_SINH_T: f64 = 3.2;

/// Tanh-sinh nodes on [a, b]. Nodes are tagged by nesting level so the
/// same evaluations give the step-h, 2h and 4h sums.
#[derive(Debug, Clone)]
pub struct TanhSinhRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    level: Vec<u8>,
    h: f64,
}

impl TanhSinhRule {
    /// Rule with about `points` nodes (made odd) over t in [-3.2, 3.2].
    pub fn new(a: f64, b: f64, points: usize) -> Self {
        let n = points.max(9) | 1;
        let half = (n - 1) / 2;
        let h = TANH_SINH_T / half as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut level = Vec::with_capacity(n);
        for j in -(half as i64)..=(half as i64) {
            let t = j as f64 * h;
            let s = FRAC_PI_2 * t.sinh();
            let x = a + (b - a) / (1.0 + (-2.0 * s).exp());
            let cs = s.cosh();
            let w = 0.5 * (b - a) * FRAC_PI_2 * t.cosh() / (cs * cs);
            if x <= a || x >= b || w == 0.0 || !w.is_finite() {
                continue;
            }
            nodes.push(x);
            weights.push(w);
            level.push(if j % 4 == 0 {
                0
            } else if j % 2 == 0 {
                1
            } else {
                2
            });
        }
        TanhSinhRule {
            nodes,
            weights,
            level,
            h,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates f(index, node) and returns (value, error estimate).
    pub fn integrate<F: FnMut(usize, f64) -> C64>(&self, mut f: F) -> (C64, f64) {
        let mut s = [C64::new(0.0, 0.0); 3];
        let mut mag = 0.0;
        for (i, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = w * f(i, x);
            mag += v.norm();
            s[self.level[i] as usize] += v;
        }
        let i4 = s[0] * (4.0 * self.h);
        let i2 = (s[0] + s[1]) * (2.0 * self.h);
        let i1 = (s[0] + s[1] + s[2]) * self.h;
        let err = tanh_sinh_error(i1, i2, i4, mag * self.h);
        (i1, err)
    }
}

fn tanh_sinh_error(i1: C64, i2: C64, i4: C64, mag: f64) -> f64 {
    let floor = 4.0 * f64::EPSILON * mag;
    let d1 = (i1 - i2).norm();
    let d2 = (i2 - i4).norm();
    if d1 == 0.0 {
        return floor;
    }
    if d2 == 0.0 || d1 >= d2 || d1 >= 1.0 || d2 >= 1.0 {
        return d1.max(floor);
    }
    // digits roughly double per halving of the step
    let e = (d1.ln() * d1.ln() / d2.ln()).exp();
    e.max(d1 * d1).min(d1).max(floor)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = hw * XGK[i];
        let s = f(c - x) + f(c + x);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * hw, ((k - g) * hw).norm())
}

/// Adaptive Gauss-Kronrod (7, 15) with global bisection of the worst interval.
pub fn gauss_kronrod_adaptive<F: FnMut(f64) -> C64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<(C64, f64)> {
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: C64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol {
            return Ok((total, err));
        }
        if parts.len() >= max_intervals {
            return Err(Error::no_conv(
                "adaptive Gauss-Kronrod quadrature",
                format!("error estimate {err:.3e} after {} intervals", parts.len()),
            ));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}
