//! Complex band structures from the pole equation
//! H(alpha) = alpha - alpha0 + 2 pi i kappa alpha^2 + kappa S(alpha, beta) = 0.

mod decay;
mod path;
mod solve;
mod sweep;

pub use decay::{
    bragg_resonances, decay_rate_1d, decay_vs_spacing, lattice_resonances, pole_approximation,
    DecayRow, DecayScan, Resonance,
};
pub use path::{bz_path, bz_path_uniform, high_symmetry_point, Path, PathPoint};
pub use solve::{default_guesses, solve_band, ComplexEnergy};
pub use sweep::{band_sweep, band_sweep_with, BandRoot, BandStructure, GapMarker, SweepOptions};

use crate::error::{Error, Result};
use crate::latticesum::{BlochMomentum, EwaldConfig, LatticeSum};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Physical model: resonance alpha0, coupling kappa, dimension d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub alpha0: f64,
    pub kappa: f64,
    pub d: usize,
    pub ewald: EwaldConfig,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            alpha0: 0.30,
            kappa: 5e-3,
            d: 1,
            ewald: EwaldConfig::default(),
        }
    }
}

impl ModelParams {
    pub fn new(d: usize, alpha0: f64, kappa: f64) -> Self {
        ModelParams {
            alpha0,
            kappa,
            d,
            ewald: EwaldConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return Err(Error::Invalid(format!(
                "alpha0 = {} must be positive",
                self.alpha0
            )));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::Invalid(format!(
                "kappa = {} must be positive",
                self.kappa
            )));
        }
        if !(1..=3).contains(&self.d) {
            return Err(Error::Invalid(format!("d = {} not in 1..=3", self.d)));
        }
        self.ewald.validate()
    }

    pub fn with_kappa(&self, kappa: f64) -> Self {
        ModelParams {
            kappa,
            ..self.clone()
        }
    }

    pub fn with_alpha0(&self, alpha0: f64) -> Self {
        ModelParams {
            alpha0,
            ..self.clone()
        }
    }
}

/// Single-atom decay rate 2 pi kappa alpha0^2.
pub fn gamma0(p: &ModelParams) -> f64 {
    2.0 * PI * p.kappa * p.alpha0 * p.alpha0
}

/// The pole equation at a fixed beta, with the lattice-sum caches kept.
#[derive(Debug, Clone)]
pub struct PoleEquation {
    sum: LatticeSum,
    alpha0: f64,
    kappa: f64,
}

impl PoleEquation {
    pub fn new(beta: &BlochMomentum, p: &ModelParams) -> Result<Self> {
        if !(1..=3).contains(&p.d) {
            return Err(Error::Invalid(format!("d = {} not in 1..=3", p.d)));
        }
        Ok(PoleEquation {
            sum: LatticeSum::new(p.d, beta, &p.ewald)?,
            alpha0: p.alpha0,
            kappa: p.kappa,
        })
    }

    pub fn beta(&self) -> &BlochMomentum {
        self.sum.beta()
    }

    pub fn lattice_sum(&self) -> &LatticeSum {
        &self.sum
    }

    pub fn residual(&self, alpha: C64) -> Result<C64> {
        let s = self.sum.eval(alpha)?;
        Ok(alpha - self.alpha0
            + C64::new(0.0, 2.0 * PI * self.kappa) * alpha * alpha
            + self.kappa * s)
    }
}

/// Left side of the pole equation.
pub fn pole_equation_residual(alpha: C64, beta: &BlochMomentum, p: &ModelParams) -> Result<C64> {
    if p.kappa == 0.0 {
        return Ok(alpha - p.alpha0);
    }
    PoleEquation::new(beta, p)?.residual(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(c: &[f64]) -> BlochMomentum {
        BlochMomentum::new(c).unwrap()
    }

    #[test]
    fn decoupled_limit() {
        let p = ModelParams {
            kappa: 0.0,
            ..Default::default()
        };
        let r = pole_equation_residual(C64::new(0.4, -0.1), &bm(&[0.2]), &p).unwrap();
        assert!((r - C64::new(0.1, -0.1)).norm() < 1e-16);
    }

    #[test]
    fn residual_is_even_in_beta() {
        let p = ModelParams::new(2, 0.3, 5e-3);
        let a = C64::new(0.31, -0.002);
        let r1 = pole_equation_residual(a, &bm(&[0.2, 0.35]), &p).unwrap();
        let r2 = pole_equation_residual(a, &bm(&[-0.2, -0.35]), &p).unwrap();
        assert!((r1 - r2).norm() < 1e-14);
    }

    #[test]
    fn residual_at_pole_approximation_is_second_order() {
        let p = ModelParams::default();
        let b = bm(&[0.4]);
        let a = pole_approximation(&b, &p).unwrap().alpha;
        let r = pole_equation_residual(a, &b, &p).unwrap();
        assert!(r.norm() < 10.0 * p.kappa * p.kappa, "{r}");
    }

    #[test]
    fn gamma0_values() {
        let p = ModelParams::default();
        assert!((gamma0(&p) - 2.827_433_388_230_814e-3).abs() < 1e-15);
        assert_eq!(gamma0(&p.with_kappa(0.0)), 0.0);
        assert!((gamma0(&p.with_alpha0(0.6)) / gamma0(&p) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::default().validate().is_ok());
        assert!(ModelParams::new(4, 0.3, 5e-3).validate().is_err());
        assert!(ModelParams::new(1, -0.3, 5e-3).validate().is_err());
        assert!(ModelParams::new(1, 0.3, 0.0).validate().is_err());
    }
}
