//! Root finding for the pole equation: damped complex Newton with a
//! central-difference derivative, Müller's method as fallback, deflation.

use super::{pole_approximation, ModelParams, PoleEquation};
use crate::error::{Error, Result};
use crate::latticesum::BlochMomentum;
use log::debug;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

const MAX_ITER: usize = 200;
const ACCEPT_RESIDUAL: f64 = 1e-10;
const MERGE_DIST: f64 = 1e-8;
const MAX_IM: f64 = 1e-9;

/// A certified root of the pole equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEnergy {
    pub alpha: C64,
    /// |H(alpha)| at the returned root.
    pub residual: f64,
    /// Size of the last Newton correction (contraction certificate).
    pub last_step: f64,
}

fn derivative(eq: &PoleEquation, a: C64) -> Result<C64> {
    let h = 1e-7 * (1.0 + a.norm());
    Ok((eq.residual(a + h)? - eq.residual(a - h)?) / (2.0 * h))
}

fn admissible(a: C64) -> bool {
    a.re > 1e-6 && a.re < 50.0 && a.im.abs() < 1.0
}

fn newton(eq: &PoleEquation, guess: C64) -> Result<ComplexEnergy> {
    let mut a = guess;
    let mut f = eq.residual(a)?;
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_ITER {
        if f.norm() < 1e-15 {
            break;
        }
        let df = derivative(eq, a)?;
        let step = -f / df;
        if !(step.re.is_finite() && step.im.is_finite()) || df.norm() < 1e-14 {
            return muller(eq, a);
        }
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let cand = a + lambda * step;
            if admissible(cand) {
                if let Ok(fc) = eq.residual(cand) {
                    if fc.norm() < f.norm() {
                        accepted = Some((cand, fc));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        let Some((cand, fc)) = accepted else {
            if f.norm() < ACCEPT_RESIDUAL {
                break;
            }
            return muller(eq, a);
        };
        last_step = (cand - a).norm();
        a = cand;
        f = fc;
        if last_step < 1e-15 * (1.0 + a.norm()) {
            break;
        }
    }
    finish(a, f, last_step)
}

fn finish(a: C64, f: C64, last_step: f64) -> Result<ComplexEnergy> {
    if f.norm() < ACCEPT_RESIDUAL {
        Ok(ComplexEnergy {
            alpha: a,
            residual: f.norm(),
            last_step,
        })
    } else {
        Err(Error::no_conv(
            "pole-equation root",
            format!(
                "residual {:.3e} at alpha = {a} after {MAX_ITER} iterations",
                f.norm()
            ),
        ))
    }
}

fn muller(eq: &PoleEquation, start: C64) -> Result<ComplexEnergy> {
    let d = 1e-3 * (1.0 + start.norm());
    let mut x = [start - d, start + d, start];
    let mut f = [eq.residual(x[0])?, eq.residual(x[1])?, eq.residual(x[2])?];
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_ITER {
        if f[2].norm() < 1e-15 {
            break;
        }
        let h1 = x[1] - x[0];
        let h2 = x[2] - x[1];
        let d1 = (f[1] - f[0]) / h1;
        let d2 = (f[2] - f[1]) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * f[2] * a).sqrt();
        let den = if (b + disc).norm() > (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        if den.norm() == 0.0 {
            break;
        }
        let dx = -2.0 * f[2] / den;
        let next = x[2] + dx;
        if !admissible(next) {
            break;
        }
        let fnext = eq.residual(next)?;
        x = [x[1], x[2], next];
        f = [f[1], f[2], fnext];
        last_step = dx.norm();
        if last_step < 1e-15 * (1.0 + next.norm()) {
            break;
        }
    }
    finish(x[2], f[2], last_step)
}

/// Pole approximation plus free-photon guesses near |beta + h| for |h|_inf <= 1.
pub fn default_guesses(beta: &BlochMomentum, p: &ModelParams) -> Vec<C64> {
    let mut g = Vec::new();
    if let Ok(e) = pole_approximation(beta, p) {
        g.push(e.alpha);
    }
    let b = beta.reduced();
    let c = b.components();
    let d = c.len();
    let n = 3usize.pow(d as u32);
    let mut qs = Vec::with_capacity(n);
    for idx in 0..n {
        let mut rest = idx;
        let mut q2 = 0.0;
        for bi in c {
            let h = (rest % 3) as f64 - 1.0;
            rest /= 3;
            q2 += (bi + h).powi(2);
        }
        let q = q2.sqrt();
        if q > 1e-3 {
            qs.push(q);
        }
    }
    qs.sort_by(f64::total_cmp);
    qs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    for q in qs {
        g.push(C64::new(q * (1.0 - 1e-2), 0.0));
        g.push(C64::new(q * (1.0 + 1e-2), -1e-3));
    }
    g
}

fn merge(roots: &mut Vec<ComplexEnergy>, r: ComplexEnergy) {
    match roots
        .iter_mut()
        .find(|x| (x.alpha - r.alpha).norm() < MERGE_DIST)
    {
        Some(x) if r.residual < x.residual => *x = r,
        Some(_) => {}
        None => roots.push(r),
    }
}

/// Solves with an already constructed equation; returns the roots and the
/// error of the last failed guess.
pub(crate) fn solve_with(
    eq: &PoleEquation,
    guesses: &[C64],
) -> (Vec<ComplexEnergy>, Option<Error>) {
    let mut roots = Vec::new();
    let mut last_err = None;
    for &g in guesses {
        match newton(eq, g) {
            Ok(r) if r.alpha.im <= MAX_IM => merge(&mut roots, r),
            Ok(r) => debug!("rejected unphysical root {} (Im > {MAX_IM})", r.alpha),
            Err(e) => {
                debug!("guess {g}: {e}");
                last_err = Some(e);
            }
        }
    }
    roots.sort_by(|a, b| a.alpha.re.total_cmp(&b.alpha.re));
    (roots, last_err)
}

/// All distinct physical roots reached from `guesses`, sorted by Re alpha.
pub fn solve_band(
    beta: &BlochMomentum,
    p: &ModelParams,
    guesses: &[C64],
) -> Result<Vec<ComplexEnergy>> {
    p.validate()?;
    if guesses.is_empty() {
        return Err(Error::Invalid("solve_band needs at least one guess".into()));
    }
    let eq = PoleEquation::new(beta, p)?;
    let (roots, err) = solve_with(&eq, guesses);
    match (roots.is_empty(), err) {
        (true, Some(e)) => Err(e),
        (true, None) => Err(Error::no_conv(
            "pole-equation root",
            "no physical root found",
        )),
        _ => Ok(roots),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::pole_equation_residual;

    fn bm(c: &[f64]) -> BlochMomentum {
        BlochMomentum::new(c).unwrap()
    }

    #[test]
    fn atom_like_root_at_zone_centre() {
        let p = ModelParams::default();
        let b = bm(&[0.0]);
        let roots = solve_band(&b, &p, &default_guesses(&b, &p)).unwrap();
        let r = roots
            .iter()
            .find(|r| (r.alpha - C64::new(0.301_258_54, -4.790e-3)).norm() < 1e-6)
            .expect("atom-like root");
        assert!(r.residual < 1e-10);
        assert!(pole_equation_residual(r.alpha, &b, &p).unwrap().norm() < 1e-10);
    }

    #[test]
    fn dark_root_is_real() {
        let p = ModelParams::default();
        let b = bm(&[0.45]);
        let roots = solve_band(&b, &p, &default_guesses(&b, &p)).unwrap();
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert!((roots[0].alpha.re - 0.300_464_72).abs() < 1e-7);
        assert!(roots[0].alpha.im.abs() < 1e-8);
    }

    #[test]
    fn roots_are_even_in_beta() {
        let p = ModelParams::new(2, 0.3, 5e-3);
        let b = bm(&[0.1, 0.25]);
        let r1 = solve_band(&b, &p, &default_guesses(&b, &p)).unwrap();
        let r2 = solve_band(&b.neg(), &p, &default_guesses(&b.neg(), &p)).unwrap();
        assert_eq!(r1.len(), r2.len());
        for (a, b) in r1.iter().zip(&r2) {
            assert!((a.alpha - b.alpha).norm() < 1e-10);
        }
    }

    #[test]
    fn three_dimensional_roots_are_real() {
        let p = ModelParams::new(3, 0.3, 5e-3);
        let b = bm(&[0.2, 0.1, 0.05]);
        let roots = solve_band(&b, &p, &default_guesses(&b, &p)).unwrap();
        assert!(!roots.is_empty());
        for r in roots {
            assert!(r.alpha.im.abs() < 1e-9, "{}", r.alpha);
        }
    }

    #[test]
    fn empty_guesses_rejected() {
        assert!(solve_band(&bm(&[0.1]), &ModelParams::default(), &[]).is_err());
    }
}
