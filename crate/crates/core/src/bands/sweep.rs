//! Continuation sweeps along a Brillouin-zone path with branch tracking.
//!
//! Anchor points (every `anchor_stride`-th point) are solved serially, each
//! seeded by the previous anchor. The points between two anchors are then
//! solved in parallel chunks, each chunk continuing from its own anchor, so
//! the result does not depend on the number of worker threads.

use super::path::{Path, PathPoint};
use super::solve::{default_guesses, solve_with, ComplexEnergy};
use super::{ModelParams, PoleEquation};
use crate::error::Result;
use log::warn;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

const GAP_DIST: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOptions {
    pub anchor_stride: usize,
    /// Free-photon and pole-approximation seeds at every point, not only the first.
    pub reseed_every_point: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            anchor_stride: 8,
            reseed_every_point: true,
        }
    }
}

/// A root that fell within 1e-3 of a light-cone/Bragg locus |beta + h|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapMarker {
    pub point: usize,
    pub alpha: C64,
    pub locus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandRoot {
    pub branch: usize,
    pub energy: ComplexEnergy,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandStructure {
    pub params: ModelParams,
    pub path: Path,
    /// Roots per path point, sorted by Re alpha.
    pub roots: Vec<Vec<BandRoot>>,
    pub gaps: Vec<GapMarker>,
    /// Points where no root converged, with the last error.
    pub failures: Vec<(usize, String)>,
    pub n_branches: usize,
}

impl BandStructure {
    /// (point index, root) pairs of one branch in path order.
    pub fn branch(&self, id: usize) -> Vec<(usize, ComplexEnergy)> {
        self.roots
            .iter()
            .enumerate()
            .flat_map(|(i, rs)| {
                rs.iter()
                    .filter(|r| r.branch == id)
                    .map(move |r| (i, r.energy))
            })
            .collect()
    }

    /// Fraction of path points with at least one root or a gap marker.
    pub fn converged_fraction(&self) -> f64 {
        if self.roots.is_empty() {
            return 1.0;
        }
        let ok = (0..self.roots.len())
            .filter(|&i| !self.roots[i].is_empty() || self.gaps.iter().any(|g| g.point == i))
            .count();
        ok as f64 / self.roots.len() as f64
    }

    pub fn max_abs_im(&self) -> f64 {
        self.roots
            .iter()
            .flatten()
            .map(|r| r.energy.alpha.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn point(&self, i: usize) -> &PathPoint {
        &self.path.points[i]
    }
}

struct PointResult {
    roots: Vec<ComplexEnergy>,
    gaps: Vec<(C64, f64)>,
    error: Option<String>,
}

fn loci(point: &PathPoint, max: f64) -> Vec<f64> {
    super::lattice_resonances(&point.beta.reduced(), max)
        .iter()
        .map(|r| r.alpha0)
        .collect()
}

fn solve_point(point: &PathPoint, p: &ModelParams, previous: &[C64], reseed: bool) -> PointResult {
    let eq = match PoleEquation::new(&point.beta, p) {
        Ok(e) => e,
        Err(e) => {
            return PointResult {
                roots: vec![],
                gaps: vec![],
                error: Some(e.to_string()),
            }
        }
    };
    let mut guesses: Vec<C64> = previous.to_vec();
    if reseed || previous.is_empty() {
        guesses.extend(default_guesses(&point.beta, p));
    }
    let (roots, err) = solve_with(&eq, &guesses);
    let max = roots.iter().map(|r| r.alpha.re).fold(0.0, f64::max) + 2.0 * GAP_DIST;
    let ls = loci(point, max);
    let mut kept = Vec::new();
    let mut gaps = Vec::new();
    for r in roots {
        match ls.iter().find(|&&q| (r.alpha - q).norm() < GAP_DIST) {
            Some(&q) => gaps.push((r.alpha, q)),
            None => kept.push(r),
        }
    }
    let error = if kept.is_empty() && gaps.is_empty() {
        Some(err.map_or_else(|| "no physical root".to_string(), |e| e.to_string()))
    } else {
        None
    };
    PointResult {
        roots: kept,
        gaps,
        error,
    }
}

fn seeds(r: &PointResult) -> Vec<C64> {
    r.roots.iter().map(|x| x.alpha).collect()
}

/// Sweep with default options.
pub fn band_sweep(path: &Path, p: &ModelParams) -> Result<BandStructure> {
    band_sweep_with(path, p, &SweepOptions::default())
}

pub fn band_sweep_with(path: &Path, p: &ModelParams, opt: &SweepOptions) -> Result<BandStructure> {
    p.validate()?;
    if path.d != p.d {
        return Err(crate::Error::Invalid(format!(
            "path is {}D but d = {}",
            path.d, p.d
        )));
    }
    let n = path.points.len();
    let k = opt.anchor_stride.max(1);
    let mut results: Vec<Option<PointResult>> = (0..n).map(|_| None).collect();
    let anchors: Vec<usize> = (0..n).step_by(k).collect();
    let mut prev: Vec<C64> = Vec::new();
    for &a in &anchors {
        let r = solve_point(&path.points[a], p, &prev, opt.reseed_every_point);
        if !r.roots.is_empty() {
            prev = seeds(&r);
        }
        results[a] = Some(r);
    }
    let chunks: Vec<(usize, Vec<PointResult>)> = anchors
        .par_iter()
        .map(|&a| {
            let mut prev = seeds(results[a].as_ref().expect("anchor solved"));
            let mut out = Vec::new();
            for i in (a + 1)..(a + k).min(n) {
                let r = solve_point(&path.points[i], p, &prev, opt.reseed_every_point);
                if !r.roots.is_empty() {
                    prev = seeds(&r);
                }
                out.push(r);
            }
            (a, out)
        })
        .collect();
    for (a, out) in chunks {
        for (j, r) in out.into_iter().enumerate() {
            results[a + 1 + j] = Some(r);
        }
    }

    let mut roots = Vec::with_capacity(n);
    let mut gaps = Vec::new();
    let mut failures = Vec::new();
    let mut prev: Vec<BandRoot> = Vec::new();
    let mut n_branches = 0;
    for (i, r) in results.into_iter().enumerate() {
        let r = r.expect("every point solved");
        if let Some(e) = r.error {
            warn!("path point {i}: {e}");
            failures.push((i, e));
        }
        gaps.extend(r.gaps.iter().map(|&(alpha, locus)| GapMarker {
            point: i,
            alpha,
            locus,
        }));
        let labeled = label(&prev, &r.roots, &mut n_branches);
        if !labeled.is_empty() {
            prev = labeled.clone();
        }
        roots.push(labeled);
    }
    Ok(BandStructure {
        params: p.clone(),
        path: path.clone(),
        roots,
        gaps,
        failures,
        n_branches,
    })
}

/// Minimal-distance matching of new roots to the branches of the previous point.
fn label(prev: &[BandRoot], roots: &[ComplexEnergy], next_id: &mut usize) -> Vec<BandRoot> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in prev.iter().enumerate() {
        for (j, r) in roots.iter().enumerate() {
            pairs.push(((p.energy.alpha - r.alpha).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used_prev = vec![false; prev.len()];
    let mut id: Vec<Option<usize>> = vec![None; roots.len()];
    for (_, i, j) in pairs {
        if !used_prev[i] && id[j].is_none() {
            used_prev[i] = true;
            id[j] = Some(prev[i].branch);
        }
    }
    roots
        .iter()
        .zip(id)
        .map(|(r, b)| {
            let branch = b.unwrap_or_else(|| {
                *next_id += 1;
                *next_id - 1
            });
            BandRoot { branch, energy: *r }
        })
        .collect()
}
