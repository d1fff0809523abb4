//! Green's function of the nonlocal operator sqrt(-Laplacian) - k in 3D.
//!
//! G(r; k) = G(r; -k) + 2k G_helm(r; k), where the static part is
//! G(r; -k) = 1/(2 pi^2 r^2) - (i k / 4 pi^2 r) [e^{ikr} E1(ikr) - e^{-ikr} E1(-ikr)]
//! and G_helm = e^{+-ikr}/(4 pi r) with the sign of Im k (outgoing for real k > 0).

use crate::error::{Error, Result};
use crate::specfun::e1_scaled;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Distance and complex wavenumber, both in units of the lattice spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensArgs {
    pub r: f64,
    pub k: C64,
}

/// G(r; -k): the part without the Helmholtz term.
pub fn greens_static(r: f64, k: C64) -> Result<C64> {
    if !(r > 0.0) {
        return Err(Error::domain(
            "greens_function",
            format!("r = {r} must be positive"),
        ));
    }
    let base = 1.0 / (2.0 * PI * PI * r * r);
    if k == C64::new(0.0, 0.0) {
        return Ok(C64::new(base, 0.0));
    }
    let z = C64::new(0.0, 1.0) * k * r;
    if z.im == 0.0 {
        return Err(Error::domain("greens_function", "i k r on the cut of E1"));
    }
    let bracket = e1_scaled(z) - e1_scaled(-z);
    Ok(base - C64::new(0.0, 1.0) * k / (4.0 * PI * PI * r) * bracket)
}

/// Whether the Helmholtz term is present and which exponent it carries.
fn helmholtz_sign(k: C64) -> Option<f64> {
    if k.im > 0.0 {
        Some(1.0)
    } else if k.im < 0.0 {
        Some(-1.0)
    } else if k.re > 0.0 {
        Some(1.0)
    } else {
        None
    }
}

/// G(r; k) with the causal choice of the Helmholtz term.
pub fn greens_function(args: GreensArgs) -> Result<C64> {
    let GreensArgs { r, k } = args;
    let g = greens_static(r, k)?;
    if k.im == 0.0 && k.re <= 0.0 {
        return Ok(g);
    }
    let s = helmholtz_sign(k).unwrap_or(1.0);
    let helm = k * (C64::new(0.0, s) * k * r).exp() / (2.0 * PI * r);
    Ok(g + helm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(r: f64, k: C64) -> C64 {
        greens_function(GreensArgs { r, k }).unwrap()
    }

    #[test]
    fn static_value_at_unit_distance() {
        let v = g(1.0, C64::new(0.0, 0.0));
        assert!((v.re - 0.050_660_591_821_168_89).abs() < 1e-15);
    }

    #[test]
    fn decomposition_example() {
        let k = C64::new(0.3, 0.0);
        let d = g(1.0, k) - g(1.0, -k);
        let expect = 0.6 * C64::new(0.0, 0.3).exp() / (4.0 * PI);
        assert!((d - expect).norm() < 1e-14);
        assert!((d - C64::new(0.045_613_957_368_119_07, 0.014_110_050_502_107_19)).norm() < 1e-15);
    }

    #[test]
    fn far_field_is_helmholtz_dominated() {
        let k = C64::new(1.0, 0.0);
        let r = 100.0;
        let v = g(r, k);
        let helm = k * (C64::new(0.0, 1.0) * k * r).exp() / (2.0 * PI * r);
        assert!((v - helm).norm() / v.norm() < 1e-3);
    }

    #[test]
    fn rejects_nonpositive_distance() {
        assert!(greens_function(GreensArgs {
            r: 0.0,
            k: C64::new(1.0, 0.0)
        })
        .is_err());
        assert!(greens_function(GreensArgs {
            r: -1.0,
            k: C64::new(1.0, 0.0)
        })
        .is_err());
    }

    #[test]
    fn small_kr_has_no_cancellation_loss() {
        // the bracket tends to -i pi sign(Re k) as kr -> 0
        let k = C64::new(1e-6, 0.0);
        let v = g(1.0, k);
        let lead = 1.0 / (2.0 * PI * PI) - k.re / (4.0 * PI) + k.re / (2.0 * PI);
        assert!((v.re - lead).abs() < 1e-11);
    }
}
