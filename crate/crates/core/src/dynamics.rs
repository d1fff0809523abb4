//! Single-excitation dynamics: psi(beta, tau) = exp(-2 pi i alpha(beta) tau) psi(beta, 0)
//! on the half-shifted grid beta_k = (k + 1/2)/N - 1/2, followed by an inverse
//! DFT onto the sites of a window.

use crate::bands::{default_guesses, gamma0, pole_approximation, solve_band, ModelParams};
use crate::error::{Error, Result};
use crate::latticesum::BlochMomentum;
use log::warn;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Units in which `TimeGrid::values` are given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeUnit {
    /// tau = c t / a.
    RawTau,
    /// Gamma0 tau.
    Gamma0Tau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub values: Vec<f64>,
    pub unit: TimeUnit,
}

impl TimeGrid {
    pub fn new(values: Vec<f64>, unit: TimeUnit) -> Result<Self> {
        let g = TimeGrid { values, unit };
        g.validate()?;
        Ok(g)
    }

    /// `n + 1` evenly spaced values from 0 to `max`.
    pub fn linspace(max: f64, n: usize, unit: TimeUnit) -> Result<Self> {
        if n == 0 || !(max > 0.0) {
            return Err(Error::Invalid("time grid needs n >= 1 and max > 0".into()));
        }
        TimeGrid::new((0..=n).map(|i| max * i as f64 / n as f64).collect(), unit)
    }

    pub fn validate(&self) -> Result<()> {
        match self.values.first() {
            Some(&0.0) => {}
            _ => return Err(Error::Invalid("time grid must start at 0".into())),
        }
        if self
            .values
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(Error::Invalid(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Raw tau values for the given model.
    pub fn taus(&self, p: &ModelParams) -> Vec<f64> {
        match self.unit {
            TimeUnit::RawTau => self.values.clone(),
            TimeUnit::Gamma0Tau => {
                let g0 = gamma0(p);
                self.values.iter().map(|v| v / g0).collect()
            }
        }
    }
}

/// psi(beta, 0) on the momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Only the atom at the origin excited: psi(beta, 0) = 1.
    PointSource,
    /// A single grid momentum (multi-index into the grid).
    PlaneWave(Vec<usize>),
    /// Arbitrary values in row-major grid order, length N^d.
    Momentum(Vec<C64>),
}

/// Which band supplies alpha(beta).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandSource {
    PoleApproximation,
    /// Full pole-equation root nearest the pole approximation.
    FullSolver,
}

/// Site amplitudes on the window [lo, hi]^d at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavepacketFrame {
    pub tau: f64,
    pub d: usize,
    pub lo: i64,
    pub hi: i64,
    /// Row-major over the window, first axis slowest.
    pub amplitudes: Vec<C64>,
}

impl WavepacketFrame {
    pub fn side(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Site vector of a flat index.
    pub fn site(&self, mut idx: usize) -> Vec<i64> {
        let s = self.side();
        let mut n = vec![0; self.d];
        for k in (0..self.d).rev() {
            n[k] = self.lo + (idx % s) as i64;
            idx /= s;
        }
        n
    }

    pub fn amplitude(&self, n: &[i64]) -> Option<C64> {
        if n.len() != self.d || n.iter().any(|&x| x < self.lo || x > self.hi) {
            return None;
        }
        let s = self.side();
        let idx = n.iter().fold(0, |acc, &x| acc * s + (x - self.lo) as usize);
        Some(self.amplitudes[idx])
    }

    /// Root-mean-square distance from the origin, weighted by |psi_n|^2.
    pub fn rms_radius(&self) -> f64 {
        let mut w = 0.0;
        let mut m = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            let r2: i64 = self.site(i).iter().map(|x| x * x).sum();
            w += p;
            m += p * r2 as f64;
        }
        if w > 0.0 {
            (m / w).sqrt()
        } else {
            0.0
        }
    }
}

/// Sum of |psi_n|^2 over the window.
pub fn frame_norm(frame: &WavepacketFrame) -> f64 {
    frame.amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// exp(-2 pi i alpha(beta) tau) with alpha from the pole approximation.
pub fn momentum_propagator(beta: &BlochMomentum, tau: f64, p: &ModelParams) -> Result<C64> {
    if !(tau >= 0.0) {
        return Err(Error::Invalid(format!("tau = {tau} must be non-negative")));
    }
    let a = pole_approximation(beta, p)?.alpha;
    Ok(propagate(a, tau))
}

fn propagate(alpha: C64, tau: f64) -> C64 {
    if tau == 0.0 {
        return C64::new(1.0, 0.0);
    }
    (C64::new(0.0, -2.0 * PI * tau) * alpha).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicsOptions {
    pub window: usize,
    pub band: BandSource,
    /// Repeat the last time on a doubled grid to estimate the quadrature error.
    pub refine_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavepacketRun {
    pub grid_n: usize,
    pub frames: Vec<WavepacketFrame>,
    /// Grid-doubling estimate at the last time (0 when not requested).
    pub quad_error: f64,
    /// max_n |psi_n(0) - delta_{n,0}| for a point source.
    pub reconstruction_error: Option<f64>,
    pub warnings: Vec<String>,
}

fn grid_beta(n: usize, k: usize) -> f64 {
    (k as f64 + 0.5) / n as f64 - 0.5
}

/// alpha(beta) for every grid point, using the cubic symmetry
/// alpha(beta) = alpha(P |beta|) to evaluate each orbit once.
fn band_on_grid(p: &ModelParams, n: usize, band: BandSource) -> Result<Vec<C64>> {
    let d = p.d;
    let total = n.pow(d as u32);
    let fold = |k: usize| k.min(n - 1 - k);
    let key_of = |mut idx: usize| {
        let mut key = vec![0usize; d];
        for slot in key.iter_mut().rev() {
            *slot = fold(idx % n);
            idx /= n;
        }
        key.sort_unstable();
        key
    };
    let mut keys: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut idx_key = Vec::with_capacity(total);
    for i in 0..total {
        let k = key_of(i);
        let next = keys.len();
        idx_key.push(*keys.entry(k).or_insert(next));
    }
    let mut uniq: Vec<(Vec<usize>, usize)> = keys.into_iter().collect();
    uniq.sort_by_key(|x| x.1);
    let values: Vec<Result<C64>> = uniq
        .par_iter()
        .map(|(k, _)| {
            let c: Vec<f64> = k.iter().map(|&j| grid_beta(n, j)).collect();
            let beta = BlochMomentum::new(&c)?;
            let pa = pole_approximation(&beta, p)?.alpha;
            match band {
                BandSource::PoleApproximation => Ok(pa),
                BandSource::FullSolver => {
                    let mut g = vec![pa];
                    g.extend(default_guesses(&beta, p));
                    let roots = solve_band(&beta, p, &g)?;
                    Ok(roots
                        .iter()
                        .min_by(|a, b| (a.alpha - pa).norm().total_cmp(&(b.alpha - pa).norm()))
                        .expect("non-empty")
                        .alpha)
                }
            }
        })
        .collect();
    let values: Vec<C64> = values.into_iter().collect::<Result<_>>()?;
    Ok(idx_key.into_iter().map(|k| values[k]).collect())
}

fn initial_values(init: &InitialState, d: usize, n: usize) -> Result<Vec<C64>> {
    let total = n.pow(d as u32);
    match init {
        InitialState::PointSource => Ok(vec![C64::new(1.0, 0.0); total]),
        InitialState::PlaneWave(idx) => {
            if idx.len() != d || idx.iter().any(|&k| k >= n) {
                return Err(Error::Invalid(format!(
                    "plane-wave index {idx:?} outside the grid"
                )));
            }
            let mut v = vec![C64::new(0.0, 0.0); total];
            let flat = idx.iter().fold(0, |acc, &k| acc * n + k);
            v[flat] = C64::new(n.pow(d as u32) as f64, 0.0).sqrt();
            Ok(v)
        }
        InitialState::Momentum(v) => {
            if v.len() != total {
                return Err(Error::Invalid(format!(
                    "initial momentum state has {} values, grid has {total}",
                    v.len()
                )));
            }
            Ok(v.clone())
        }
    }
}

/// Transform along one axis: data has `d` axes, the first `axis` of which
/// already have length `m` (window), the rest length `n` (grid).
fn dft_axis(
    data: &[C64],
    outer: usize,
    inner: usize,
    n: usize,
    table: &[C64],
    m: usize,
) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); outer * m * inner];
    for o in 0..outer {
        for j in 0..m {
            let row = &table[j * n..(j + 1) * n];
            let dst = &mut out[(o * m + j) * inner..(o * m + j + 1) * inner];
            for (k, &w) in row.iter().enumerate() {
                let src = &data[(o * n + k) * inner..(o * n + k + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
    }
    out
}

fn to_sites(phi: &[C64], d: usize, n: usize, lo: i64, hi: i64) -> Vec<C64> {
    let m = (hi - lo + 1) as usize;
    let mut table = Vec::with_capacity(m * n);
    for j in 0..m {
        let site = (lo + j as i64) as f64;
        for k in 0..n {
            table.push(C64::from_polar(
                1.0 / n as f64,
                2.0 * PI * grid_beta(n, k) * site,
            ));
        }
    }
    let mut data = phi.to_vec();
    for axis in 0..d {
        let outer = m.pow(axis as u32);
        let inner = n.pow((d - axis - 1) as u32);
        data = dft_axis(&data, outer, inner, n, &table, m);
    }
    data
}

fn window_bounds(n: usize, window: usize) -> (i64, i64) {
    let w = window as i64;
    let half = (n / 2) as i64;
    // the sites -N/2 and +N/2 coincide on the torus; keep one of them
    (-w, w.min(half - 1 + (n % 2) as i64))
}

/// Evolves `initial` on an N^d momentum grid and reconstructs site
/// amplitudes inside the window at every time of `times`.
pub fn evolve_wavepacket(
    p: &ModelParams,
    grid_n: usize,
    times: &TimeGrid,
    initial: &InitialState,
    opt: &DynamicsOptions,
) -> Result<WavepacketRun> {
    p.validate()?;
    times.validate()?;
    if grid_n < 32 {
        return Err(Error::Invalid(format!(
            "grid_n = {grid_n} must be at least 32"
        )));
    }
    if opt.window > grid_n / 2 {
        return Err(Error::Invalid(format!(
            "window {} exceeds grid_n/2 = {} (aliasing)",
            opt.window,
            grid_n / 2
        )));
    }
    let d = p.d;
    let (lo, hi) = window_bounds(grid_n, opt.window);
    let alpha = band_on_grid(p, grid_n, opt.band)?;
    let psi0 = initial_values(initial, d, grid_n)?;
    let taus = times.taus(p);
    let frames: Vec<WavepacketFrame> = taus
        .par_iter()
        .map(|&tau| {
            let phi: Vec<C64> = alpha
                .iter()
                .zip(&psi0)
                .map(|(&a, &v)| propagate(a, tau) * v)
                .collect();
            WavepacketFrame {
                tau,
                d,
                lo,
                hi,
                amplitudes: to_sites(&phi, d, grid_n, lo, hi),
            }
        })
        .collect();

    let mut warnings = Vec::new();
    let reconstruction_error = match initial {
        InitialState::PointSource => {
            let f = &frames[0];
            let err = f
                .amplitudes
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let delta = if f.site(i).iter().all(|&x| x == 0) {
                        1.0
                    } else {
                        0.0
                    };
                    (a - delta).norm()
                })
                .fold(0.0, f64::max);
            if err > 1e-6 {
                let msg = format!("aliasing: tau = 0 reconstruction error {err:.3e} exceeds 1e-6");
                warn!("{msg}");
                warnings.push(msg);
            }
            Some(err)
        }
        _ => None,
    };

    let quad_error = if opt.refine_check && matches!(initial, InitialState::PointSource) {
        let n2 = 2 * grid_n;
        let alpha2 = band_on_grid(p, n2, opt.band)?;
        let tau = *taus.last().expect("non-empty time grid");
        let phi: Vec<C64> = alpha2.iter().map(|&a| propagate(a, tau)).collect();
        let fine = to_sites(&phi, d, n2, lo, hi);
        let coarse = &frames.last().expect("frames").amplitudes;
        let site_err = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
            .fold(0.0, f64::max);
        let norm_err = (coarse.iter().map(|a| a.norm_sqr()).sum::<f64>()
            - fine.iter().map(|a| a.norm_sqr()).sum::<f64>())
        .abs();
        site_err.max(norm_err)
    } else {
        0.0
    };

    Ok(WavepacketRun {
        grid_n,
        frames,
        quad_error,
        reconstruction_error,
        warnings,
    })
}

/// (site, |psi_n|^2) for each selected time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpatialProfile {
    pub tau: f64,
    pub sites: Vec<(Vec<i64>, f64)>,
}

/// Extracts |psi_n|^2 tables for the frames whose tau matches `tau_select`.
pub fn spatial_profile(
    frames: &[WavepacketFrame],
    tau_select: &[f64],
) -> Result<Vec<SpatialProfile>> {
    tau_select
        .iter()
        .map(|&t| {
            let f = frames
                .iter()
                .find(|f| (f.tau - t).abs() <= 1e-12 * (1.0 + t.abs()))
                .ok_or_else(|| Error::Invalid(format!("no frame at tau = {t}")))?;
            let sites = f
                .amplitudes
                .iter()
                .enumerate()
                .map(|(i, a)| (f.site(i), a.norm_sqr()))
                .collect();
            Ok(SpatialProfile { tau: f.tau, sites })
        })
        .collect()
}
