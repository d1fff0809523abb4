//! Exponential integral E1(z) on the principal branch.
//!
//! Three regimes: the convergent power series where it is well conditioned
//! (|z| + Re z small), a modified-Lentz continued fraction for the scaled
//! function exp(z) E1(z), and the asymptotic series for |z| >= 40.
//! On the negative real axis the sign of a zero imaginary part selects the
//! side of the cut, matching the behaviour of the complex logarithm.

use num_complex::Complex64 as C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ASYMPTOTIC_RADIUS: f64 = 40.0;
const SERIES_LIMIT: f64 = 6.0;
const CF_MAX_ITER: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Regime {
    Series,
    ContinuedFraction,
    Asymptotic,
}

pub(crate) fn regime(z: C64) -> Regime {
    let r = z.norm();
    if r >= ASYMPTOTIC_RADIUS {
        Regime::Asymptotic
    } else if r + z.re < SERIES_LIMIT {
        Regime::Series
    } else {
        Regime::ContinuedFraction
    }
}

/// Power series E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!).
pub fn e1_series(z: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for k in 1..400 {
        let kf = k as f64;
        term *= -z / kf;
        let add = term / kf;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

/// Continued fraction for exp(z) E1(z); `None` when it fails to settle.
pub fn e1_continued_fraction_scaled(z: C64) -> Option<C64> {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = C64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = C64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = C64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 4.0 * f64::EPSILON {
            return Some(h);
        }
    }
    None
}

fn e1_asymptotic_scaled(z: C64) -> C64 {
    // exp(z) E1(z) ~ (1/z) sum (-1)^k k! / z^k, stopped at the smallest term
    let inv = 1.0 / z;
    let mut term = inv;
    let mut sum = inv;
    let mut last = term.norm();
    for k in 1..200 {
        let next = term * (-(k as f64)) * inv;
        let n = next.norm();
        if n >= last {
            break;
        }
        sum += next;
        term = next;
        last = n;
        if n <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// exp(z) E1(z). Caller guarantees z != 0.
pub fn e1_scaled(z: C64) -> C64 {
    match regime(z) {
        Regime::Asymptotic => e1_asymptotic_scaled(z),
        Regime::Series => z.exp() * e1_series(z),
        Regime::ContinuedFraction => {
            e1_continued_fraction_scaled(z).unwrap_or_else(|| z.exp() * e1_series(z))
        }
    }
}

/// E1(z). Caller guarantees z != 0.
pub fn e1(z: C64) -> C64 {
    match regime(z) {
        Regime::Series => e1_series(z),
        _ => (-z).exp() * e1_scaled(z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e1_of_one() {
        let v = e1(C64::new(1.0, 0.0));
        assert!((v.re - 0.219_383_934_395_520_27).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn sides_of_the_cut() {
        let above = e1(C64::new(-2.0, 0.0));
        let below = e1(C64::new(-2.0, -0.0));
        assert!((above.im + std::f64::consts::PI).abs() < 1e-14);
        assert!((below.im - std::f64::consts::PI).abs() < 1e-14);
        assert!((above.re - below.re).abs() < 1e-14);
        // -Ei(2)
        assert!((above.re + 4.954_234_356_001_89).abs() < 1e-13);
    }

    #[test]
    fn asymptotic_matches_continued_fraction() {
        for &(re, im) in &[(40.0, 1.0), (-35.0, 25.0), (0.0, 45.0), (30.0, -30.0)] {
            let z = C64::new(re, im);
            let a = e1_asymptotic_scaled(z);
            let c = e1_continued_fraction_scaled(z).unwrap();
            assert!((a - c).norm() / c.norm() < 1e-14, "{z}");
        }
    }

    #[test]
    fn regimes_are_contiguous() {
        for &(re, im) in &[
            (5.9, 0.0),
            (6.1, 0.0),
            (-3.0, 2.0),
            (39.9, 0.1),
            (-39.9, 0.1),
        ] {
            let z = C64::new(re, im);
            let s = e1_scaled(z);
            let c = e1_continued_fraction_scaled(z).unwrap();
            assert!((s - c).norm() / c.norm() < 1e-11, "{z}");
        }
    }
}
