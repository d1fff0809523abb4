//! The lattice sum S(alpha, beta) = sum_{n != 0} G(n; 2 pi alpha) exp(-2 pi i beta.n).
//!
//! Generic path (any d): S = S12 + S3r + S3m, where S12 is the combined
//! theta-function integral of the static part (substituted t = exp(-u^2)),
//! and S3r/S3m are the real- and reciprocal-space Ewald halves of the
//! Helmholtz part. The 1D default is the closed form.

mod closed;
mod ewald;
mod oracle;

pub use closed::{
    a_closed_form, a_series_accelerated, a_series_oracle, lattice_sum_1d, s2_closed_1d,
    s3_closed_1d,
};
pub use oracle::{direct_sum_oracle, OracleResult};

use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod_adaptive, TanhSinhRule};
use crate::specfun::{erfc_kernel, theta3_s};
use ewald::{build_recip, build_shells, real_radius2, recip_radius2, RecipTerm, Shell};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Upper end of the u-integral; the integrand is O(exp(-u^2)) beyond it.
const U_MAX: f64 = 6.5;
/// Term lists are built to cover Re(alpha^2) up to this value.
const RE2_CAPACITY: f64 = 4.0;
const QUAD_TOL: f64 = 1e-10;
/// Largest pi^2 eta^2 Re(alpha^2) allowed before eta is reduced; the Ewald
/// halves carry exp(pi^2 eta^2 alpha^2) factors that cancel in the total.
const GROWTH_MAX: f64 = 2.0 * PI;

/// Wraps a real number into [-1/2, 1/2).
pub fn wrap(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

/// Dimensionless Bloch momentum (a d-vector, d in 1..=3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMomentum {
    d: usize,
    c: [f64; 3],
}

impl BlochMomentum {
    pub fn new(components: &[f64]) -> Result<Self> {
        let d = components.len();
        if !(1..=3).contains(&d) {
            return Err(Error::Invalid(format!(
                "Bloch momentum must have 1 to 3 components, got {d}"
            )));
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite Bloch momentum".into()));
        }
        let mut c = [0.0; 3];
        c[..d].copy_from_slice(components);
        Ok(BlochMomentum { d, c })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &[f64] {
        &self.c[..self.d]
    }

    /// The equivalent momentum in the first Brillouin zone [-1/2, 1/2)^d.
    pub fn reduced(&self) -> Self {
        let mut c = self.c;
        for x in c.iter_mut().take(self.d) {
            *x = wrap(*x);
        }
        BlochMomentum { d: self.d, c }
    }

    pub fn neg(&self) -> Self {
        let mut c = self.c;
        for x in c.iter_mut() {
            *x = -*x;
        }
        BlochMomentum { d: self.d, c }
    }

    pub fn norm(&self) -> f64 {
        self.components().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// True when every component is an integer (the zone centre).
    pub fn is_lattice_vector(&self) -> bool {
        self.components()
            .iter()
            .all(|x| (x - x.round()).abs() < 1e-14)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadScheme {
    TanhSinh,
    AdaptiveGk,
}

/// Ewald and quadrature settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EwaldConfig {
    /// Splitting parameter, default 1/sqrt(pi). Reduced automatically where
    /// pi^2 eta^2 Re(alpha^2) would exceed 2 pi.
    pub eta: f64,
    /// Fixed real-space radius; automatic envelope cutoff when absent.
    pub real_cutoff: Option<u32>,
    /// Fixed reciprocal radius; automatic envelope cutoff when absent.
    pub recip_cutoff: Option<u32>,
    /// Tanh-sinh nodes for the theta integrals.
    pub quad_points: usize,
    pub quad_scheme: QuadScheme,
    /// Use the generic engine for d = 1 instead of the closed form.
    pub generic_1d: bool,
}

impl Default for EwaldConfig {
    fn default() -> Self {
        EwaldConfig {
            eta: 1.0 / PI.sqrt(),
            real_cutoff: None,
            recip_cutoff: None,
            quad_points: 205,
            quad_scheme: QuadScheme::TanhSinh,
            generic_1d: false,
        }
    }
}

impl EwaldConfig {
    pub fn with_eta(eta: f64) -> Self {
        EwaldConfig {
            eta,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.2..=1.5).contains(&self.eta) {
            return Err(Error::Invalid(format!(
                "eta = {} outside [0.2, 1.5]",
                self.eta
            )));
        }
        if self.quad_points < 33 {
            return Err(Error::Invalid(format!(
                "quad_points = {} is too small (minimum 33)",
                self.quad_points
            )));
        }
        Ok(())
    }
}

/// Components of a generic-path evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumBreakdown {
    /// Static theta integral (absent where it diverges).
    pub s1: Option<f64>,
    /// Mellin-type theta integral (absent where it diverges).
    pub s2: Option<C64>,
    /// Combined S1 + S2 integral, always finite.
    pub s12: C64,
    pub s3_real: C64,
    pub s3_recip: C64,
    pub total: C64,
    /// Quadrature error estimate of `s12`.
    pub quad_error: f64,
    /// Rounding estimate from cancellation inside the Ewald sums.
    pub ewald_error: f64,
}

impl SumBreakdown {
    pub fn error_estimate(&self) -> f64 {
        self.quad_error + self.ewald_error
    }
}

#[derive(Debug, Clone)]
struct Generic {
    eta: f64,
    rule: TanhSinhRule,
    theta: Vec<f64>,
    shells: Vec<Shell>,
    recip: Vec<RecipTerm>,
    re2_cap: f64,
}

/// theta3(pi b, e^{-s}) - 1, without cancellation against the leading 1.
/// Re(alpha^2) (or eta^2) at which pi^2 eta^2 Re(alpha^2) reaches the growth cap.
fn growth_limit(x: f64) -> f64 {
    if x > 0.0 {
        GROWTH_MAX / (PI * PI * x)
    } else {
        f64::INFINITY
    }
}

fn theta_m1(b: f64, s: f64) -> f64 {
    theta3_s(PI * b, s) - 1.0
}

fn theta_product_m1(beta: &[f64], u: f64) -> f64 {
    let s = u * u;
    let mut acc = 0.0;
    for &b in beta {
        let t = theta_m1(b, s);
        acc = acc + t + acc * t;
    }
    acc
}

/// Evaluator of S(alpha, beta) at a fixed beta; caches everything that
/// does not depend on alpha.
#[derive(Debug, Clone)]
pub struct LatticeSum {
    d: usize,
    beta: BlochMomentum,
    cfg: EwaldConfig,
    generic: Option<Generic>,
}

impl LatticeSum {
    pub fn new(d: usize, beta: &BlochMomentum, cfg: &EwaldConfig) -> Result<Self> {
        if beta.d() != d {
            return Err(Error::Invalid(format!(
                "Bloch momentum has {} components but d = {d}",
                beta.d()
            )));
        }
        cfg.validate()?;
        let beta = beta.reduced();
        let generic = if d >= 2 || cfg.generic_1d {
            Some(Self::build(
                d,
                &beta,
                cfg,
                cfg.eta,
                RE2_CAPACITY.min(growth_limit(cfg.eta * cfg.eta)),
            ))
        } else {
            None
        };
        Ok(LatticeSum {
            d,
            beta,
            cfg: cfg.clone(),
            generic,
        })
    }

    fn build(d: usize, beta: &BlochMomentum, cfg: &EwaldConfig, eta: f64, re2_cap: f64) -> Generic {
        let rule = TanhSinhRule::new(0.0, U_MAX, cfg.quad_points);
        let b = beta.components();
        let theta = rule.nodes.iter().map(|&u| theta_product_m1(b, u)).collect();
        let r2 = match cfg.real_cutoff {
            Some(r) => (r as f64).powi(2),
            None => real_radius2(eta, re2_cap),
        };
        let q2 = match cfg.recip_cutoff {
            Some(r) => (r as f64).powi(2),
            None => recip_radius2(eta, re2_cap),
        };
        Generic {
            eta,
            rule,
            theta,
            shells: build_shells(d, b, r2),
            recip: build_recip(d, b, q2),
            re2_cap,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self) -> &BlochMomentum {
        &self.beta
    }

    pub fn config(&self) -> &EwaldConfig {
        &self.cfg
    }

    /// S(alpha, beta) by the configured default path.
    pub fn eval(&self, alpha: C64) -> Result<C64> {
        if self.generic.is_none() {
            return lattice_sum_1d(alpha, self.beta.components()[0]);
        }
        Ok(self.breakdown_inner(alpha, false)?.total)
    }

    /// Generic-path evaluation with its component breakdown. For d = 1
    /// without `generic_1d` the term lists are built on demand.
    pub fn breakdown(&self, alpha: C64) -> Result<SumBreakdown> {
        self.breakdown_inner(alpha, true)
    }

    fn breakdown_inner(&self, alpha: C64, separate: bool) -> Result<SumBreakdown> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::Invalid("non-finite alpha".into()));
        }
        let re2 = (alpha * alpha).re;
        let local;
        let eta = self.cfg.eta.min(growth_limit(re2).sqrt());
        let g = match &self.generic {
            Some(g) if re2 <= g.re2_cap => g,
            _ => {
                local = Self::build(self.d, &self.beta, &self.cfg, eta, re2.max(RE2_CAPACITY));
                &local
            }
        };
        let (s12, quad_error) = self.theta_integral(g, alpha, Kernel::Combined)?;
        let (s1, s2) = if separate && !(self.d >= 2 && self.beta.is_lattice_vector()) {
            let (a, _) = self.theta_integral(g, alpha, Kernel::Static)?;
            let (b, _) = self.theta_integral(g, alpha, Kernel::Mellin)?;
            (Some(a.re), Some(b))
        } else {
            (None, None)
        };
        let (s3r, mag_r) = ewald::real_space(alpha, g.eta, &g.shells);
        let (s3m, mag_m) = ewald::reciprocal(self.d, alpha, g.eta, &g.recip)?;
        let total = s12 + s3r + s3m;
        Ok(SumBreakdown {
            s1,
            s2,
            s12,
            s3_real: s3r,
            s3_recip: s3m,
            total,
            quad_error,
            ewald_error: 4.0 * f64::EPSILON * (mag_r + mag_m),
        })
    }

    fn theta_integral(&self, g: &Generic, alpha: C64, kernel: Kernel) -> Result<(C64, f64)> {
        let f = |u: f64, theta: f64| -> C64 {
            let x = PI * alpha / u;
            let k = match kernel {
                Kernel::Combined => erfc_kernel(x),
                Kernel::Static => C64::new(1.0, 0.0),
                Kernel::Mellin => erfc_kernel(x) - 1.0,
            };
            u * k * theta / (PI * PI)
        };
        if self.cfg.quad_scheme == QuadScheme::TanhSinh {
            let (v, e) = g.rule.integrate(|i, u| f(u, g.theta[i]));
            if e <= QUAD_TOL && v.re.is_finite() && v.im.is_finite() {
                return Ok((v, e));
            }
        }
        let b = self.beta.components().to_vec();
        gauss_kronrod_adaptive(
            |u| f(u, theta_product_m1(&b, u)),
            0.0,
            U_MAX,
            0.1 * QUAD_TOL,
            4000,
        )
        .map_err(|e| match e {
            Error::NonConvergence { msg, .. } => {
                Error::no_conv(format!("theta integral ({kernel:?})"), msg)
            }
            other => other,
        })
    }

    /// Ewald real- and reciprocal-space parts (S3r, S3m).
    pub fn s3_parts(&self, alpha: C64) -> Result<(C64, C64)> {
        let b = self.breakdown_inner(alpha, false)?;
        Ok((b.s3_real, b.s3_recip))
    }
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Combined,
    Static,
    Mellin,
}

fn generic_eval(d: usize, beta: &BlochMomentum, cfg: &EwaldConfig) -> Result<LatticeSum> {
    let cfg = EwaldConfig {
        generic_1d: true,
        ..cfg.clone()
    };
    LatticeSum::new(d, beta, &cfg)
}

/// S1: the theta integral of the 1/(2 pi^2 |n|^2) sum.
pub fn s1_theta_integral(d: usize, beta: &BlochMomentum, quad: &EwaldConfig) -> Result<f64> {
    let ev = generic_eval(d, beta, quad)?;
    if d >= 2 && ev.beta.is_lattice_vector() {
        return Err(Error::singular(
            "S1",
            "the static sum diverges at beta in Z^d for d >= 2",
        ));
    }
    let g = ev.generic.as_ref().expect("generic path");
    ev.theta_integral(g, C64::new(0.0, 0.0), Kernel::Static)
        .map(|(v, _)| v.re)
}

/// S2: the theta integral of the E1-bracket part of the static Green's function.
pub fn s2_theta_integral(
    d: usize,
    alpha: C64,
    beta: &BlochMomentum,
    quad: &EwaldConfig,
) -> Result<C64> {
    let ev = generic_eval(d, beta, quad)?;
    if d >= 2 && ev.beta.is_lattice_vector() {
        return Err(Error::singular(
            "S2",
            "the sum diverges at beta in Z^d for d >= 2",
        ));
    }
    let g = ev.generic.as_ref().expect("generic path");
    ev.theta_integral(g, alpha, Kernel::Mellin).map(|(v, _)| v)
}

/// S3: the Helmholtz part by Ewald summation.
pub fn s3_ewald(d: usize, alpha: C64, beta: &BlochMomentum, cfg: &EwaldConfig) -> Result<C64> {
    let (r, m) = generic_eval(d, beta, cfg)?.s3_parts(alpha)?;
    Ok(r + m)
}

/// S(alpha, beta); d = 1 uses the closed form unless `cfg.generic_1d`.
pub fn lattice_sum(d: usize, alpha: C64, beta: &BlochMomentum, cfg: &EwaldConfig) -> Result<C64> {
    LatticeSum::new(d, beta, cfg)?.eval(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(c: &[f64]) -> BlochMomentum {
        BlochMomentum::new(c).unwrap()
    }

    fn generic() -> EwaldConfig {
        EwaldConfig {
            generic_1d: true,
            ..Default::default()
        }
    }

    #[test]
    fn wrap_into_zone() {
        assert_eq!(wrap(0.5), -0.5);
        assert_eq!(wrap(-0.5), -0.5);
        assert!((wrap(1.2) - 0.2).abs() < 1e-15);
        assert!((wrap(-0.7) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn momentum_validation() {
        assert!(BlochMomentum::new(&[]).is_err());
        assert!(BlochMomentum::new(&[0.1; 4]).is_err());
        assert!(BlochMomentum::new(&[f64::NAN]).is_err());
        let b = bm(&[0.7, -1.2]).reduced();
        assert!((b.components()[0] + 0.3).abs() < 1e-15);
        assert!((b.components()[1] + 0.2).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(EwaldConfig::with_eta(0.1).validate().is_err());
        assert!(EwaldConfig::with_eta(1.6).validate().is_err());
        assert!(EwaldConfig::default().validate().is_ok());
        assert!(LatticeSum::new(2, &bm(&[0.1]), &EwaldConfig::default()).is_err());
    }

    #[test]
    fn s1_one_dimensional_values() {
        let cfg = EwaldConfig::default();
        let v = s1_theta_integral(1, &bm(&[0.0]), &cfg).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-12, "{v}");
        let v = s1_theta_integral(1, &bm(&[0.5]), &cfg).unwrap();
        assert!((v + 1.0 / 12.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn s2_matches_closed_form() {
        let cfg = EwaldConfig::default();
        let a = C64::new(0.25, 0.0);
        let v = s2_theta_integral(1, a, &bm(&[0.3]), &cfg).unwrap();
        let c = s2_closed_1d(a, 0.3).unwrap();
        assert!((v - c).norm() < 1e-9, "{v} vs {c}");
        let v0 = s2_theta_integral(1, C64::new(1e-12, 0.0), &bm(&[0.3]), &cfg).unwrap();
        assert!(v0.norm() < 1e-9);
    }

    #[test]
    fn s1_s2_singular_at_zone_centre() {
        let cfg = EwaldConfig::default();
        assert!(s1_theta_integral(2, &bm(&[0.0, 1.0]), &cfg)
            .unwrap_err()
            .is_singularity());
        assert!(
            s2_theta_integral(3, C64::new(0.3, 0.0), &bm(&[0.0; 3]), &cfg)
                .unwrap_err()
                .is_singularity()
        );
        // the combined sum is finite there
        assert!(lattice_sum(3, C64::new(0.3, -0.01), &bm(&[0.0; 3]), &cfg).is_ok());
    }

    #[test]
    fn one_dimensional_assembly() {
        let a = C64::new(0.3, 0.05);
        let s = lattice_sum(1, a, &bm(&[0.2]), &generic()).unwrap();
        let c = lattice_sum_1d(a, 0.2).unwrap();
        assert!((s - c).norm() < 1e-9, "{s} vs {c}");
        let s3 = s3_ewald(1, a, &bm(&[0.2]), &EwaldConfig::default()).unwrap();
        assert!((s3 - s3_closed_1d(a, 0.2).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn continuation_below_real_axis() {
        for &(re, im, b) in &[
            (0.3, -0.05, 0.2),
            (0.7, -0.2, -0.4),
            (0.3, -0.15, 0.45),
            (1.2, -0.1, 0.0),
        ] {
            let a = C64::new(re, im);
            let s = lattice_sum(1, a, &bm(&[b]), &generic()).unwrap();
            let c = lattice_sum_1d(a, b).unwrap();
            assert!((s - c).norm() < 1e-9, "alpha={a} beta={b}: {s} vs {c}");
        }
    }

    #[test]
    fn real_alpha_matches_closed_form() {
        for &(re, b) in &[(0.3, 0.0), (0.3, 0.4), (1.2, 0.1), (0.25, -0.3)] {
            let a = C64::new(re, 0.0);
            let s = lattice_sum(1, a, &bm(&[b]), &generic()).unwrap();
            let c = lattice_sum_1d(a, b).unwrap();
            assert!((s - c).norm() < 1e-9, "alpha={a} beta={b}: {s} vs {c}");
        }
    }

    #[test]
    fn eta_invariance_two_dimensions() {
        let a = C64::new(0.3, 0.0);
        let b = bm(&[0.25, 0.1]);
        let vals: Vec<C64> = [0.45, 1.0 / PI.sqrt(), 0.8]
            .iter()
            .map(|&e| lattice_sum(2, a, &b, &EwaldConfig::with_eta(e)).unwrap())
            .collect();
        for v in &vals[1..] {
            assert!((v - vals[0]).norm() < 1e-9, "{vals:?}");
        }
    }

    #[test]
    fn symmetry_and_periodicity() {
        let cfg = EwaldConfig::default();
        let a = C64::new(0.3, 0.0);
        let s = lattice_sum(2, a, &bm(&[0.2, 0.4]), &cfg).unwrap();
        let m = lattice_sum(2, a, &bm(&[-0.2, -0.4]), &cfg).unwrap();
        let p = lattice_sum(2, a, &bm(&[1.2, 0.4]), &cfg).unwrap();
        assert!((s - m).norm() < 1e-10);
        assert!((s - p).norm() < 1e-10);
    }

    #[test]
    fn three_dimensional_resonance_is_reported() {
        let cfg = EwaldConfig::default();
        let e = lattice_sum(3, C64::new(0.5, 0.0), &bm(&[0.5, 0.0, 0.0]), &cfg).unwrap_err();
        assert!(e.is_singularity());
    }

    #[test]
    fn dark_region_imaginary_part_cancels_self_energy() {
        let cfg = EwaldConfig::default();
        for d in 1..=3 {
            let c = vec![0.4; d];
            let a = C64::new(0.3, 0.0);
            let s = lattice_sum(d, a, &bm(&c), &cfg).unwrap();
            assert!((s.im + 2.0 * PI * 0.09).abs() < 1e-10, "d={d}: {s}");
        }
    }

    #[test]
    fn breakdown_sums_to_total() {
        let ev = LatticeSum::new(2, &bm(&[0.2, 0.4]), &EwaldConfig::default()).unwrap();
        let b = ev.breakdown(C64::new(0.3, 0.1)).unwrap();
        let s12 = C64::new(b.s1.unwrap(), 0.0) + b.s2.unwrap();
        assert!((s12 - b.s12).norm() < 1e-9);
        assert!((b.s12 + b.s3_real + b.s3_recip - b.total).norm() < 1e-15);
        assert!(b.error_estimate() < 1e-9);
    }

    #[test]
    fn large_alpha_rebuilds_term_lists() {
        let cfg = EwaldConfig::default();
        let b = bm(&[0.1, 0.2]);
        let a = C64::new(2.5, 0.0);
        let v1 = lattice_sum(2, a, &b, &cfg).unwrap();
        let v2 = lattice_sum(2, a, &b, &EwaldConfig::with_eta(0.45)).unwrap();
        assert!((v1 - v2).norm() < 1e-7 * (1.0 + v1.norm()), "{v1} {v2}");
    }
}
