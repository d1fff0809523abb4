//! One-dimensional closed forms and the A(x) series.

use crate::error::{Error, Result};
use crate::specfun::{bernoulli2, ln_gamma_unchecked};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use super::wrap;

/// 1 - exp(i theta), accurate when exp(i theta) is close to 1.
fn one_minus_exp_i(theta: C64) -> C64 {
    let (x, y) = (theta.re, theta.im);
    let em = (-y).exp_m1();
    let s = (0.5 * x).sin();
    let re = -(em * x.cos() - 2.0 * s * s);
    let im = -(-y).exp() * x.sin();
    C64::new(re, im)
}

fn check_1d(alpha: C64, beta: f64) -> Result<f64> {
    if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.is_finite()) {
        return Err(Error::Invalid("non-finite alpha or beta".into()));
    }
    if alpha == C64::new(0.0, 0.0) {
        return Err(Error::domain("lattice_sum_1d", "alpha = 0"));
    }
    let b = wrap(beta);
    if alpha.im == 0.0 {
        for s in [alpha.re + b, alpha.re - b] {
            if (s - s.round()).abs() < 1e-14 {
                return Err(Error::singular(
                    "light cone",
                    format!(
                        "alpha = {} coincides with |beta + h| (beta = {b})",
                        alpha.re
                    ),
                ));
            }
        }
    }
    Ok(b)
}

/// The alpha-dependent part of the 1D theta-integral pair (S2 in closed form).
pub fn s2_closed_1d(alpha: C64, beta: f64) -> Result<C64> {
    let b = check_1d(alpha, beta)?;
    let ab = b.abs();
    let a2 = alpha * alpha;
    Ok(
        -2.0 * a2 + 2.0 * a2 * alpha.ln() + alpha * (2.0 * PI * (alpha + ab)).ln()
            - alpha * ln_gamma_unchecked(1.0 + alpha + b)
            - alpha * ln_gamma_unchecked(1.0 + alpha - b),
    )
}

/// The Helmholtz part of the 1D lattice sum in closed form.
pub fn s3_closed_1d(alpha: C64, beta: f64) -> Result<C64> {
    let b = check_1d(alpha, beta)?;
    Ok(-alpha * one_minus_exp_i(2.0 * PI * (alpha + b)).ln()
        - alpha * one_minus_exp_i(2.0 * PI * (alpha - b)).ln())
}

/// S(alpha, beta) for the 1D lattice in closed form, principal branches.
pub fn lattice_sum_1d(alpha: C64, beta: f64) -> Result<C64> {
    let b = check_1d(alpha, beta)?;
    Ok(bernoulli2(b.abs()) + s2_closed_1d(alpha, b)? + s3_closed_1d(alpha, b)?)
}

fn a_term(n: f64, x: f64) -> f64 {
    let m = 2.0 * n + x;
    let mp = 2.0 * n - 1.0 + x;
    (m + 1.0) * (1.0 / m).ln_1p() + mp * (1.0 / mp).ln_1p() - 2.0
}

/// Partial sum of the A(x) series with `terms` terms (compensated summation).
pub fn a_series_oracle(x: f64, terms: usize) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    // smallest terms first
    for n in (1..=terms).rev() {
        let y = 0.5 * a_term(n as f64, x) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Richardson-accelerated A(x): the tail of the series is c/N + O(1/N^2).
pub fn a_series_accelerated(x: f64, terms: usize) -> f64 {
    2.0 * a_series_oracle(x, 2 * terms) - a_series_oracle(x, terms)
}

/// Closed form of A(x).
pub fn a_closed_form(x: f64) -> f64 {
    let lg = ln_gamma_unchecked(C64::new(1.0 + 0.5 * x, 0.0)).re;
    0.5 * (x + (x + 1.0) * (2.0 / (x + 1.0)).ln() + 2.0 * lg + 1.0 - (2.0 * PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_alpha_limit_is_bernoulli() {
        let v = lattice_sum_1d(C64::new(1e-8, 0.0), 0.37).unwrap();
        assert!((v.re - bernoulli2(0.37)).abs() < 1e-6);
        assert!((bernoulli2(0.37) + 0.066_433_333_333_333_33).abs() < 1e-15);
    }

    #[test]
    fn periodic_and_even_in_beta() {
        let a = C64::new(0.3, 0.1);
        let s = lattice_sum_1d(a, 0.2).unwrap();
        assert!((s - lattice_sum_1d(a, 1.2).unwrap()).norm() < 1e-13);
        assert!((s - lattice_sum_1d(a, -0.2).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn light_cone_is_singular() {
        let e = lattice_sum_1d(C64::new(0.25, 0.0), 0.25).unwrap_err();
        assert!(e.is_singularity());
        assert!(lattice_sum_1d(C64::new(0.0, 0.0), 0.1).is_err());
    }

    #[test]
    fn a_constants() {
        assert!((a_closed_form(0.0) - 0.5 * (1.0 - PI.ln())).abs() < 1e-14);
        // A(1) = C1 + C0 - ln 2 + ln Gamma(3/2)
        let c0 = 0.5 * (1.0 - PI.ln());
        let c1 = 0.5 * (1.0 + 2f64.ln());
        let lg = ln_gamma_unchecked(C64::new(1.5, 0.0)).re;
        assert!((a_closed_form(1.0) - (c1 + c0 - 2f64.ln() + lg)).abs() < 1e-14);
    }

    #[test]
    fn a_truncation_error_decreases() {
        let exact = a_closed_form(0.5);
        let mut prev = f64::INFINITY;
        for n in [10_000, 20_000, 40_000, 80_000] {
            let e = (a_series_oracle(0.5, n) - exact).abs();
            assert!(e < prev);
            prev = e;
        }
    }
}
