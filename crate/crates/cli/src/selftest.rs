//! Oracle suite behind `latticebands selftest`.

use crate::config::RunConfig;
use crate::report::{Report, Table};
use latticebands::bands::default_guesses;
use latticebands::latticesum::{a_closed_form, a_series_accelerated};
use latticebands::{
    direct_sum_oracle, greens_function, lattice_sum_1d, pole_approximation, solve_band,
    BlochMomentum, EwaldConfig, GreensArgs, LatticeSum, ModelParams, Result, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

pub struct SuiteResult {
    pub name: &'static str,
    pub points: usize,
    pub worst: f64,
    pub tolerance: String,
    pub pass: bool,
    pub seconds: f64,
}

struct Ctx {
    eta: f64,
    skew: f64,
    quick: bool,
    seed: u64,
}

impl Ctx {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(1_000_003).wrapping_add(salt))
    }

    fn cfg(&self, eta: f64) -> EwaldConfig {
        EwaldConfig {
            generic_1d: true,
            ..EwaldConfig::with_eta(eta)
        }
    }

    /// S(alpha, beta) from the generic engine. With a nonzero skew the
    /// reciprocal-space half uses eta (1 + skew): an inconsistent split.
    fn sum_at(&self, d: usize, alpha: C64, beta: &BlochMomentum, eta: f64) -> Result<C64> {
        let ls = LatticeSum::new(d, beta, &self.cfg(eta))?;
        if self.skew == 0.0 {
            return ls.eval(alpha);
        }
        let b = ls.breakdown(alpha)?;
        let skewed = LatticeSum::new(d, beta, &self.cfg(eta * (1.0 + self.skew)))?;
        let (_, recip) = skewed.s3_parts(alpha)?;
        Ok(b.s12 + b.s3_real + recip)
    }
}

fn random_beta(rng: &mut ChaCha8Rng, d: usize) -> BlochMomentum {
    let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect();
    BlochMomentum::new(&c).expect("finite momentum")
}

fn oracle(ctx: &Ctx) -> Result<(usize, f64)> {
    let mut rng = ctx.rng(1);
    let per_d = if ctx.quick { 6 } else { 50 };
    let mut worst = 0.0f64;
    for (d, radius) in [(1usize, 400.0), (2, 150.0), (3, 90.0)] {
        for _ in 0..per_d {
            let alpha = C64::new(rng.gen_range(0.05..1.0), rng.gen_range(0.1..0.5));
            let beta = random_beta(&mut rng, d);
            let s = ctx.sum_at(d, alpha, &beta, ctx.eta)?;
            let o = direct_sum_oracle(d, alpha, &beta, radius)?;
            worst = worst.max((s - o.value).norm() / (1.0 + s.norm()));
        }
    }
    Ok((3 * per_d, worst))
}

fn closed_form(ctx: &Ctx) -> Result<(usize, f64)> {
    let n = if ctx.quick { 8 } else { 20 };
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let alpha = C64::new(0.07 + 0.86 * t, -0.2 + 0.4 * t);
        for j in 0..n {
            let b = -0.475 + 0.95 * j as f64 / (n - 1) as f64;
            let c = lattice_sum_1d(alpha, b)?;
            let beta = BlochMomentum::new(&[b])?;
            let g = ctx.sum_at(1, alpha, &beta, ctx.eta)?;
            worst = worst.max((c - g).norm() / (1.0 + c.norm()));
        }
    }
    Ok((n * n, worst))
}

fn eta_invariance(ctx: &Ctx) -> Result<(usize, f64)> {
    let mut rng = ctx.rng(3);
    let n = if ctx.quick { 20 } else { 100 };
    let mut worst = 0.0f64;
    for _ in 0..n {
        let d = rng.gen_range(1..=3usize);
        let alpha = C64::new(rng.gen_range(0.05..0.95), rng.gen_range(-0.3..0.3));
        let beta = random_beta(&mut rng, d);
        let v: Vec<C64> = [0.45, 1.0 / PI.sqrt(), 0.8]
            .iter()
            .map(|&e| ctx.sum_at(d, alpha, &beta, e))
            .collect::<Result<_>>()?;
        let spread = v
            .iter()
            .flat_map(|a| v.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        worst = worst.max(spread / v[1].norm());
    }
    Ok((n, worst))
}

fn a_identity(ctx: &Ctx) -> Result<(usize, f64)> {
    let terms = if ctx.quick { 100_000 } else { 1_000_000 };
    let xs = [0.0, 0.5, 1.0, 2.0];
    let worst = xs
        .iter()
        .map(|&x| (a_series_accelerated(x, terms) - a_closed_form(x)).abs())
        .fold(0.0, f64::max);
    Ok((xs.len(), worst))
}

fn greens_decomposition(ctx: &Ctx) -> Result<(usize, f64)> {
    let mut rng = ctx.rng(5);
    let n = if ctx.quick { 50 } else { 500 };
    let mut worst = 0.0f64;
    for _ in 0..n {
        let r = rng.gen_range(0.1..50.0);
        let k: f64 = rng.gen_range(1e-6..3.0);
        let plus = greens_function(GreensArgs {
            r,
            k: C64::new(k, 0.0),
        })?;
        let minus = greens_function(GreensArgs {
            r,
            k: C64::new(-k, 0.0),
        })?;
        let rhs = 2.0 * k * C64::new(0.0, k * r).exp() / (4.0 * PI * r);
        worst = worst.max((plus - minus - rhs).norm());
    }
    Ok((n, worst))
}

/// Worst deviation of the measured exponent from 2.
fn pole_order(ctx: &Ctx) -> Result<(usize, f64)> {
    let betas: &[f64] = if ctx.quick {
        &[0.0, 0.2, 0.4]
    } else {
        &[0.0, 0.05, 0.1, 0.15, 0.2, 0.35, 0.4, 0.43, 0.46, 0.5]
    };
    let mut worst = 0.0f64;
    for &b in betas {
        let beta = BlochMomentum::new(&[b])?;
        let mut e = Vec::new();
        for k in [5e-3, 2.5e-3, 1.25e-3] {
            let p = ModelParams {
                ewald: EwaldConfig::with_eta(ctx.eta),
                ..ModelParams::default()
            }
            .with_kappa(k);
            let pole = pole_approximation(&beta, &p)?.alpha;
            let roots = solve_band(&beta, &p, &default_guesses(&beta, &p))?;
            e.push(
                roots
                    .iter()
                    .map(|r| (r.alpha - pole).norm())
                    .fold(f64::INFINITY, f64::min),
            );
        }
        let exponent = (e[0] / e[2]).log2() / 2.0;
        worst = worst.max((exponent - 2.0).abs());
    }
    Ok((betas.len(), worst))
}

type Suite = (
    &'static str,
    fn(&Ctx) -> Result<(usize, f64)>,
    f64,
    &'static str,
);

pub fn run(cfg: &RunConfig) -> (Report, Vec<SuiteResult>) {
    let ctx = Ctx {
        eta: cfg.ewald.eta,
        skew: cfg.selftest.eta_skew,
        quick: cfg.selftest.quick,
        seed: cfg.selftest.seed,
    };
    let suites: [Suite; 6] = [
        ("direct-sum-vs-ewald", oracle, 1e-7, "1e-7 (1+|S|)"),
        (
            "closed-form-vs-generic-1d",
            closed_form,
            1e-8,
            "1e-8 (1+|S|)",
        ),
        ("eta-invariance", eta_invariance, 1e-8, "1e-8 |S|"),
        ("a-series-vs-closed-form", a_identity, 1e-6, "1e-6"),
        ("greens-decomposition", greens_decomposition, 1e-10, "1e-10"),
        (
            "pole-approximation-order",
            pole_order,
            0.2,
            "|p - 2| <= 0.2",
        ),
    ];
    let mut results = Vec::new();
    for (name, f, tol, tol_text) in suites {
        let t = Instant::now();
        let (points, worst, pass) = match f(&ctx) {
            Ok((n, w)) => (n, w, w <= tol),
            Err(e) => {
                log::error!("{name}: {e}");
                (0, f64::NAN, false)
            }
        };
        results.push(SuiteResult {
            name,
            points,
            worst,
            tolerance: tol_text.into(),
            pass,
            seconds: t.elapsed().as_secs_f64(),
        });
    }
    let mut rep = Report::new("selftest", cfg);
    let mut t = Table::new(
        "selftest",
        &[
            ("invariant", ""),
            ("status", ""),
            ("points", ""),
            ("worst", ""),
            ("tolerance", ""),
            ("seconds", "s"),
        ],
    );
    for r in &results {
        t.push(vec![
            r.name.into(),
            if r.pass { "PASS" } else { "FAIL" }.into(),
            r.points.into(),
            r.worst.into(),
            r.tolerance.clone().into(),
            r.seconds.into(),
        ]);
    }
    rep.tables.push(t);
    (rep, results)
}
