//! Complex special functions used by the lattice-sum formulas.
//!
//! All functions are pure. The checked entry points return [`Error`] for
//! arguments outside their domain; the unchecked kernels in the
//! submodules are used on hot paths where the caller has already
//! excluded those cases.

mod expint;
mod faddeeva;
mod gamma;
mod theta;

pub use expint::{e1, e1_continued_fraction_scaled, e1_scaled, e1_series};
pub use faddeeva::{erfc, erfc_kernel, erfcx, erfcx_real, faddeeva_w};
pub use gamma::digamma;
pub use theta::{theta3_direct, theta3_modular};

pub(crate) use faddeeva::SQRT_PI;
pub(crate) use theta::theta3_s;

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// E1(z) on the principal branch (cut along the negative real axis).
pub fn exp_integral_e1(z: C64) -> Result<C64> {
    if !finite(z) {
        return Err(Error::domain("exp_integral_e1", "non-finite argument"));
    }
    if z == C64::new(0.0, 0.0) {
        return Err(Error::domain("exp_integral_e1", "z = 0"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::domain("exp_integral_e1", "z on the branch cut"));
    }
    Ok(e1(z))
}

/// erfc(z); errors only when the result is not representable.
pub fn erfc_complex(z: C64) -> Result<C64> {
    if !finite(z) {
        return Err(Error::domain("erfc_complex", "non-finite argument"));
    }
    let v = erfc(z);
    if finite(v) {
        Ok(v)
    } else {
        Err(Error::Overflow {
            func: "erfc_complex",
        })
    }
}

/// exp(z^2) erfc(z).
pub fn erfcx_complex(z: C64) -> Result<C64> {
    if !finite(z) {
        return Err(Error::domain("erfcx_complex", "non-finite argument"));
    }
    let v = erfcx(z);
    if finite(v) {
        Ok(v)
    } else {
        Err(Error::Overflow {
            func: "erfcx_complex",
        })
    }
}

/// Third Jacobi theta function theta3(z, q), 0 <= q < 1.
pub fn theta3(z: f64, q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) || !z.is_finite() {
        return Err(Error::domain("theta3", format!("q = {q} outside [0, 1)")));
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    if q > 0.9 {
        Ok(theta3_modular(z, q))
    } else {
        Ok(theta3_direct(z, q))
    }
}

/// Principal-branch ln Gamma(z).
pub fn log_gamma(z: C64) -> Result<C64> {
    if !finite(z) {
        return Err(Error::domain("log_gamma", "non-finite argument"));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::domain("log_gamma", format!("pole at z = {}", z.re)));
    }
    Ok(gamma::ln_gamma_unchecked(z))
}

pub(crate) use gamma::ln_gamma_unchecked;

/// Second Bernoulli polynomial x^2 - x + 1/6.
pub fn bernoulli2(x: f64) -> f64 {
    x * x - x + 1.0 / 6.0
}

/// Gamma((d-1)/2, z) for d in {1, 2, 3}, principal branches.
pub fn upper_gamma_half_orders(d: usize, z: C64) -> Result<C64> {
    match d {
        1 => exp_integral_e1(z),
        2 => erfc_complex(z.sqrt()).map(|v| SQRT_PI * v),
        3 => {
            let v = (-z).exp();
            if finite(v) {
                Ok(v)
            } else {
                Err(Error::Overflow {
                    func: "upper_gamma_half_orders",
                })
            }
        }
        _ => Err(Error::Invalid(format!("dimension {d} not in 1..=3"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn e1_examples() {
        let v = exp_integral_e1(c(1.0, 0.0)).unwrap();
        assert!((v.re - 0.219_383_934_395_520).abs() < 1e-14);
        let x: f64 = 50.0;
        let p = x * x.exp() * exp_integral_e1(c(x, 0.0)).unwrap().re;
        assert!((p - 1.0).abs() < 0.02);
        let z = c(0.3, 0.4);
        let a = exp_integral_e1(z.conj()).unwrap();
        let b = exp_integral_e1(z).unwrap().conj();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn e1_domain_errors() {
        assert!(exp_integral_e1(c(0.0, 0.0)).is_err());
        assert!(exp_integral_e1(c(-1.0, 0.0)).is_err());
        assert!(exp_integral_e1(c(-1.0, 1e-300)).is_ok());
    }

    #[test]
    fn erfc_examples() {
        assert_eq!(erfc_complex(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let z = c(1.2, -0.7);
        let s = erfc_complex(z).unwrap() + erfc_complex(-z).unwrap();
        assert!((s - 2.0).norm() < 1e-14);
        let x = 20.0;
        let v = PI.sqrt() * x * (x * x).exp() * erfc_complex(c(x, 0.0)).unwrap().re;
        assert!((v - 1.0).abs() < 0.002);
    }

    #[test]
    fn erfc_overflow_is_reported() {
        assert!(matches!(
            erfc_complex(c(0.0, 40.0)),
            Err(Error::Overflow { .. })
        ));
        assert!(erfcx_complex(c(-30.0, 0.0)).is_err());
    }

    #[test]
    fn erfcx_examples() {
        assert_eq!(erfcx_complex(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let v = erfcx_complex(c(10.0, 0.0)).unwrap();
        assert!((v.re - 0.056_140_992_7).abs() < 1e-10);
        let mut prev = f64::INFINITY;
        for i in 0..=500 {
            let x = i as f64 * 0.1;
            let v = erfcx_complex(c(x, 0.0)).unwrap().re;
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta3(0.7, 0.0).unwrap(), 1.0);
        assert!((theta3(0.0, 0.1).unwrap() - 1.200_200_002).abs() < 1e-14);
        assert!((theta3(PI / 2.0, 0.1).unwrap() - 0.800_199_998_000_000_2).abs() < 1e-14);
        assert!(theta3(0.1, 1.0).is_err());
        assert!(theta3(0.1, -0.2).is_err());
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        let h = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((h.re - 0.572_364_942_924_7).abs() < 1e-13);
        let z = c(0.7, 0.2);
        let r = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
        assert!(r.norm() < 1e-14);
        assert!(log_gamma(c(-2.0, 0.0)).is_err());
        assert!(log_gamma(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn log_gamma_principal_branch_far_from_axis() {
        // ln Gamma(1 + 10 i) from an independent extended-precision evaluation
        let v = log_gamma(c(1.0, 10.0)).unwrap();
        assert!((v - c(-13.637_732_188_247_271, 13.802_912_974_229_901)).norm() < 1e-12);
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli2(0.0), 1.0 / 6.0);
        assert!((bernoulli2(0.5) + 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(bernoulli2(1.0), bernoulli2(0.0));
    }

    #[test]
    fn upper_gamma_examples() {
        assert_eq!(
            upper_gamma_half_orders(3, c(0.0, 0.0)).unwrap(),
            c(1.0, 0.0)
        );
        let g = upper_gamma_half_orders(2, c(0.0, 0.0)).unwrap();
        assert!((g - PI.sqrt()).norm() < 1e-15);
        let g = upper_gamma_half_orders(1, c(1.0, 0.0)).unwrap();
        assert!((g.re - 0.219_383_934_395_520).abs() < 1e-14);
        assert!(upper_gamma_half_orders(1, c(0.0, 0.0)).is_err());
        assert!(upper_gamma_half_orders(4, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn digamma_matches_known_value() {
        // psi(1) = -Euler gamma
        let v = digamma(c(1.0, 0.0));
        assert!((v.re + 0.577_215_664_901_532_9).abs() < 1e-14);
    }
}
