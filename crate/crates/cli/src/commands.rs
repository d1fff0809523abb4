//! The sum, bands, decay and dynamics commands.

use crate::config::{momentum, RunConfig};
use crate::report::{Report, Table};
use crate::CliError;
use latticebands::bands::{band_sweep_with, bz_path, high_symmetry_point, SweepOptions};
use latticebands::{
    bragg_resonances, decay_vs_spacing, evolve_wavepacket, frame_norm, gamma0, lattice_resonances,
    lattice_sum_1d, BlochMomentum, DynamicsOptions, EwaldConfig, InitialState, LatticeSum,
    TimeGrid, TimeUnit, C64,
};
use log::{info, warn};

const NUDGE: f64 = 1e-6;

fn beta_columns(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("beta_{i}")).collect()
}

fn columns<'a>(
    fixed_before: &[(&'a str, &'a str)],
    betas: &'a [String],
    after: &[(&'a str, &'a str)],
) -> Vec<(&'a str, &'a str)> {
    let mut c: Vec<(&str, &str)> = fixed_before.to_vec();
    c.extend(betas.iter().map(|b| (b.as_str(), "2pi/a")));
    c.extend_from_slice(after);
    c
}

pub fn sum(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params().map_err(CliError::Config)?;
    let beta = cfg.sum_beta().map_err(CliError::Config)?;
    let alpha = C64::new(cfg.sum.alpha[0], cfg.sum.alpha[1]);
    let d = p.d;
    let ewald = EwaldConfig {
        generic_1d: true,
        ..p.ewald.clone()
    };
    let ls = LatticeSum::new(d, &beta, &ewald)?;
    let b = ls.breakdown(alpha)?;

    let mut rep = Report::new("sum", cfg);
    let mut t = Table::new("sum", &[("term", ""), ("re", ""), ("im", "")]);
    if let Some(s1) = b.s1 {
        t.push(vec!["s1".into(), s1.into(), 0.0.into()]);
    }
    if let Some(s2) = b.s2 {
        t.push(vec!["s2".into(), s2.re.into(), s2.im.into()]);
    }
    t.push(vec!["s1_plus_s2".into(), b.s12.re.into(), b.s12.im.into()]);
    t.push(vec![
        "s3_real".into(),
        b.s3_real.re.into(),
        b.s3_real.im.into(),
    ]);
    t.push(vec![
        "s3_recip".into(),
        b.s3_recip.re.into(),
        b.s3_recip.im.into(),
    ]);
    t.push(vec!["total".into(), b.total.re.into(), b.total.im.into()]);
    rep.estimate("quad_error", b.quad_error);
    rep.estimate("ewald_error", b.ewald_error);
    if d == 1 {
        let c = lattice_sum_1d(alpha, beta.components()[0])?;
        t.push(vec!["closed_form".into(), c.re.into(), c.im.into()]);
        rep.estimate("closed_vs_generic", (c - b.total).norm());
    }
    rep.tables.push(t);
    Ok(rep)
}

pub fn bands(cfg: &RunConfig) -> Result<(Report, f64), CliError> {
    let p = cfg.params().map_err(CliError::Config)?;
    let names = cfg.bands_path();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let path = bz_path(p.d, &refs, cfg.bands.points_per_segment)?;
    let opt = SweepOptions {
        anchor_stride: cfg.bands.anchor_stride,
        reseed_every_point: cfg.bands.reseed_every_point,
    };
    let bs = band_sweep_with(&path, &p, &opt)?;

    let betas = beta_columns(p.d);
    let cols = columns(
        &[("point", ""), ("label", ""), ("s", "2pi/a")],
        &betas,
        &[
            ("branch", ""),
            ("re_alpha", ""),
            ("im_alpha", ""),
            ("residual", ""),
        ],
    );
    let mut t = Table::new("bands", &cols);
    for (i, roots) in bs.roots.iter().enumerate() {
        let pt = bs.point(i);
        for r in roots {
            let mut row = vec![
                i.into(),
                pt.label.clone().unwrap_or_default().into(),
                pt.s.into(),
            ];
            row.extend(pt.beta.components().iter().map(|&x| x.into()));
            row.extend([
                r.branch.into(),
                r.energy.alpha.re.into(),
                r.energy.alpha.im.into(),
                r.energy.residual.into(),
            ]);
            t.push(row);
        }
    }
    let gcols = columns(
        &[("point", ""), ("s", "2pi/a")],
        &betas,
        &[("locus", ""), ("re_alpha", ""), ("im_alpha", "")],
    );
    let mut g = Table::new("gaps", &gcols);
    for m in &bs.gaps {
        let pt = bs.point(m.point);
        let mut row = vec![m.point.into(), pt.s.into()];
        row.extend(pt.beta.components().iter().map(|&x| x.into()));
        row.extend([m.locus.into(), m.alpha.re.into(), m.alpha.im.into()]);
        g.push(row);
    }
    let mut rep = Report::new("bands", cfg);
    rep.tables.push(t);
    rep.tables.push(g);
    let frac = bs.converged_fraction();
    rep.estimate("converged_fraction", frac);
    rep.estimate("max_abs_im", bs.max_abs_im());
    let worst = bs
        .roots
        .iter()
        .flatten()
        .map(|r| r.energy.residual)
        .fold(0.0, f64::max);
    rep.estimate("max_residual", worst);
    for (i, e) in &bs.failures {
        rep.notes.push(format!("point {i}: {e}"));
    }
    Ok((rep, frac))
}

/// Moves grid values that sit exactly on a locus |beta + h| off it by 1e-6.
fn nudge(beta: &BlochMomentum, grid: &[f64], notes: &mut Vec<String>) -> Vec<f64> {
    let hi = grid.iter().cloned().fold(0.0, f64::max) + 1.0;
    let loci = lattice_resonances(&beta.reduced(), hi);
    grid.iter()
        .map(|&a| {
            if loci.iter().any(|r| (r.alpha0 - a).abs() < 1e-12) {
                let n = format!(
                    "alpha0 = {a} lies on a light-cone/Bragg locus; nudged to {}",
                    a + NUDGE
                );
                info!("{n}");
                notes.push(n);
                a + NUDGE
            } else {
                a
            }
        })
        .collect()
}

pub fn decay(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params().map_err(CliError::Config)?;
    let grid = cfg.decay_grid().map_err(CliError::Config)?;
    let mut targets: Vec<(String, BlochMomentum)> = Vec::new();
    for name in &cfg.decay.points {
        targets.push((name.clone(), high_symmetry_point(p.d, name)?));
    }
    if let Some(b) = &cfg.decay.beta {
        targets.push(("beta".into(), momentum(b, p.d).map_err(CliError::Config)?));
    }
    if targets.is_empty() {
        return Err(CliError::Config(
            "decay needs at least one point or beta".into(),
        ));
    }

    let mut rep = Report::new("decay", cfg);
    let betas = beta_columns(p.d);
    let mut t = Table::new(
        "decay",
        &columns(
            &[("point", "")],
            &betas,
            &[("alpha0", ""), ("gamma_over_gamma0", "")],
        ),
    );
    let mut res = Table::new(
        "resonances",
        &[("point", ""), ("alpha0", ""), ("multiplicity", "")],
    );
    let mut feat = Table::new("features", &[("point", ""), ("kind", ""), ("alpha0", "")]);
    let mut bragg = Table::new("bragg", &[("point", ""), ("m", ""), ("alpha0", "")]);
    for (name, beta) in &targets {
        let g = nudge(beta, &grid, &mut rep.notes);
        let scan = decay_vs_spacing(beta, &g, &p)?;
        for row in &scan.rows {
            let mut r = vec![name.as_str().into()];
            r.extend(beta.components().iter().map(|&x| x.into()));
            r.push(row.alpha0.into());
            r.push(row.ratio.unwrap_or(f64::NAN).into());
            t.push(r);
        }
        for r in &scan.resonances {
            res.push(vec![
                name.as_str().into(),
                r.alpha0.into(),
                r.multiplicity.into(),
            ]);
        }
        for a in scan.peaks() {
            feat.push(vec![name.as_str().into(), "peak".into(), a.into()]);
        }
        for a in scan.crossings(1.0) {
            feat.push(vec![name.as_str().into(), "crossing".into(), a.into()]);
        }
        if let Some(a) = scan.activation(1e-6) {
            feat.push(vec![name.as_str().into(), "activation".into(), a.into()]);
        }
        if p.d == 3 && name != "beta" {
            let m_max = cfg.decay.bragg_m_max;
            for (m, a) in bragg_resonances(name.trim_start_matches('-'), m_max)?
                .into_iter()
                .enumerate()
            {
                bragg.push(vec![name.as_str().into(), (m + 1).into(), a.into()]);
            }
        }
    }
    rep.estimate("gamma0", gamma0(&p));
    rep.tables.extend([t, res, feat]);
    if p.d == 3 {
        rep.tables.push(bragg);
    }
    Ok(rep)
}

pub fn dynamics(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params().map_err(CliError::Config)?;
    let s = &cfg.dynamics;
    let times = match &s.times {
        Some(v) => TimeGrid::new(v.clone(), s.unit)?,
        None => TimeGrid::linspace(s.t_max, s.n_times, s.unit)?,
    };
    let opt = DynamicsOptions {
        window: cfg.window(),
        band: s.band,
        refine_check: s.refine_check,
    };
    let run = evolve_wavepacket(&p, cfg.grid_n(), &times, &InitialState::PointSource, &opt)?;
    let g0 = gamma0(&p);

    let mut rep = Report::new("dynamics", cfg);
    let sites: Vec<String> = (1..=p.d).map(|i| format!("n_{i}")).collect();
    let mut cols: Vec<(&str, &str)> = vec![("tau", "a/c"), ("gamma0_tau", "")];
    cols.extend(sites.iter().map(|n| (n.as_str(), "a")));
    cols.extend([("re_psi", ""), ("im_psi", ""), ("prob", "")]);
    let mut frames = Table::new("frames", &cols);
    let mut summary = Table::new(
        "summary",
        &[
            ("tau", "a/c"),
            ("gamma0_tau", ""),
            ("norm", ""),
            ("origin_prob", ""),
            ("rms_radius", "a"),
        ],
    );
    let origin = vec![0i64; p.d];
    for f in &run.frames {
        for (i, a) in f.amplitudes.iter().enumerate() {
            let mut row = vec![f.tau.into(), (g0 * f.tau).into()];
            row.extend(f.site(i).into_iter().map(|x| x.into()));
            row.extend([a.re.into(), a.im.into(), a.norm_sqr().into()]);
            frames.push(row);
        }
        let p0 = f.amplitude(&origin).map_or(f64::NAN, |a| a.norm_sqr());
        summary.push(vec![
            f.tau.into(),
            (g0 * f.tau).into(),
            frame_norm(f).into(),
            p0.into(),
            f.rms_radius().into(),
        ]);
    }
    rep.tables.extend([frames, summary]);
    rep.estimate("quad_error", run.quad_error);
    if let Some(e) = run.reconstruction_error {
        rep.estimate("reconstruction_error", e);
    }
    for w in &run.warnings {
        warn!("{w}");
        rep.notes.push(w.clone());
    }
    if matches!(s.unit, TimeUnit::RawTau) {
        rep.notes.push("times given in raw tau".into());
    }
    Ok(rep)
}
