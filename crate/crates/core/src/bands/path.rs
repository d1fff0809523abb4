//! Brillouin-zone paths through the high-symmetry points of the cubic lattice.

use crate::error::{Error, Result};
use crate::latticesum::BlochMomentum;
use serde::{Serialize, Serializer};

/// One sample on a path: momentum, cumulative arc length, optional vertex label.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPoint {
    pub beta: BlochMomentum,
    pub s: f64,
    pub label: Option<String>,
}

impl Serialize for PathPoint {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("PathPoint", 3)?;
        st.serialize_field("beta", self.beta.components())?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("label", &self.label)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path {
    pub d: usize,
    pub names: Vec<String>,
    pub points: Vec<PathPoint>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Path through arbitrary momenta, e.g. a uniform 1D grid.
    pub fn from_points(d: usize, betas: &[BlochMomentum]) -> Result<Path> {
        let mut points = Vec::with_capacity(betas.len());
        let mut s = 0.0;
        for (i, b) in betas.iter().enumerate() {
            if b.d() != d {
                return Err(Error::Invalid(format!(
                    "point {i} has {} components, d = {d}",
                    b.d()
                )));
            }
            if i > 0 {
                s += dist(betas[i - 1].components(), b.components());
            }
            points.push(PathPoint {
                beta: *b,
                s,
                label: None,
            });
        }
        Ok(Path {
            d,
            names: Vec::new(),
            points,
        })
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn canonical(name: &str) -> Result<(bool, &'static str)> {
    let t = name.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t),
    };
    let c = match t.to_ascii_uppercase().as_str() {
        "G" | "GAMMA" => "Γ",
        "X" => "X",
        "M" => "M",
        "R" => "R",
        _ if t == "Γ" => "Γ",
        _ => {
            return Err(Error::Invalid(format!(
                "unknown high-symmetry point '{name}'"
            )))
        }
    };
    Ok((neg, c))
}

/// Coordinates of a named point: Γ (or G), X, M, R, optionally prefixed by '-'.
pub fn high_symmetry_point(d: usize, name: &str) -> Result<BlochMomentum> {
    if !(1..=3).contains(&d) {
        return Err(Error::Invalid(format!("d = {d} not in 1..=3")));
    }
    let (neg, c) = canonical(name)?;
    let ones = match c {
        "Γ" => 0,
        "X" => 1,
        "M" => 2,
        _ => 3,
    };
    if ones > d {
        return Err(Error::Invalid(format!(
            "point {c} does not exist for d = {d}"
        )));
    }
    let v: Vec<f64> = (0..d).map(|i| if i < ones { 0.5 } else { 0.0 }).collect();
    let b = BlochMomentum::new(&v)?;
    Ok(if neg { b.neg() } else { b })
}

fn vertices(d: usize, names: &[&str]) -> Result<Vec<(String, BlochMomentum)>> {
    if names.len() < 2 {
        return Err(Error::Invalid("a path needs at least two points".into()));
    }
    names
        .iter()
        .map(|n| {
            let (neg, c) = canonical(n)?;
            let label = if neg { format!("-{c}") } else { c.to_string() };
            Ok((label, high_symmetry_point(d, n)?))
        })
        .collect()
}

/// Linear path through named points with `points_per_segment` samples per
/// segment, endpoints included and shared between segments.
pub fn bz_path(d: usize, names: &[&str], points_per_segment: usize) -> Result<Path> {
    if points_per_segment < 2 {
        return Err(Error::Invalid(
            "points_per_segment must be at least 2".into(),
        ));
    }
    let v = vertices(d, names)?;
    let mut points = Vec::new();
    let mut s0 = 0.0;
    for (k, w) in v.windows(2).enumerate() {
        let (a, b) = (w[0].1.components(), w[1].1.components());
        let len = dist(a, b);
        let start = if k == 0 { 0 } else { 1 };
        for j in start..points_per_segment {
            let t = j as f64 / (points_per_segment - 1) as f64;
            let c: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
            let label = if j == 0 {
                Some(w[0].0.clone())
            } else if j == points_per_segment - 1 {
                Some(w[1].0.clone())
            } else {
                None
            };
            points.push(PathPoint {
                beta: BlochMomentum::new(&c)?,
                s: s0 + t * len,
                label,
            });
        }
        s0 += len;
    }
    Ok(Path {
        d,
        names: v.into_iter().map(|x| x.0).collect(),
        points,
    })
}

/// `n` points spaced uniformly in arc length along the named path.
pub fn bz_path_uniform(d: usize, names: &[&str], n: usize) -> Result<Path> {
    if n < 2 {
        return Err(Error::Invalid("a path needs at least two samples".into()));
    }
    let v = vertices(d, names)?;
    let mut cum = vec![0.0];
    for w in v.windows(2) {
        cum.push(cum.last().unwrap() + dist(w[0].1.components(), w[1].1.components()));
    }
    let total = *cum.last().unwrap();
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let s = total * i as f64 / (n - 1) as f64;
        let k = (1..cum.len())
            .find(|&k| s <= cum[k] + 1e-15)
            .unwrap_or(cum.len() - 1)
            - 1;
        let seg = cum[k + 1] - cum[k];
        let t = if seg > 0.0 {
            ((s - cum[k]) / seg).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (a, b) = (v[k].1.components(), v[k + 1].1.components());
        let c: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
        let label = if t == 0.0 {
            Some(v[k].0.clone())
        } else if t == 1.0 {
            Some(v[k + 1].0.clone())
        } else {
            None
        };
        points.push(PathPoint {
            beta: BlochMomentum::new(&c)?,
            s,
            label,
        });
    }
    Ok(Path {
        d,
        names: v.into_iter().map(|x| x.0).collect(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_to_x_in_two_dimensions() {
        let p = bz_path(2, &["G", "X"], 3).unwrap();
        let c: Vec<Vec<f64>> = p
            .points
            .iter()
            .map(|q| q.beta.components().to_vec())
            .collect();
        assert_eq!(c, vec![vec![0.0, 0.0], vec![0.25, 0.0], vec![0.5, 0.0]]);
        assert_eq!(p.points[2].s, 0.5);
        assert_eq!(p.points[0].label.as_deref(), Some("Γ"));
    }

    #[test]
    fn closed_loop_returns_to_start() {
        let p = bz_path(2, &["Γ", "X", "M", "Γ"], 5).unwrap();
        assert_eq!(p.len(), 13);
        assert_eq!(
            p.points.first().unwrap().beta,
            p.points.last().unwrap().beta
        );
        let total = 0.5 + 0.5 + 0.5f64.sqrt();
        assert!((p.points.last().unwrap().s - total).abs() < 1e-15);
    }

    #[test]
    fn r_requires_three_dimensions() {
        assert!(bz_path(2, &["G", "R"], 4).is_err());
        assert!(bz_path(3, &["G", "R"], 4).is_ok());
        assert!(bz_path(2, &["G", "Q"], 4).is_err());
        assert!(bz_path(2, &["G"], 4).is_err());
    }

    #[test]
    fn uniform_sampling() {
        let p = bz_path_uniform(3, &["G", "X", "M", "G", "R"], 40).unwrap();
        assert_eq!(p.len(), 40);
        let last = p.points.last().unwrap();
        assert!(last
            .beta
            .components()
            .iter()
            .all(|x| (x - 0.5).abs() < 1e-12));
        for w in p.points.windows(2) {
            assert!(w[1].s > w[0].s);
        }
    }

    #[test]
    fn one_dimensional_zone() {
        let p = bz_path(1, &["-X", "G", "X"], 11).unwrap();
        assert_eq!(p.points[0].beta.components(), &[-0.5]);
        assert_eq!(p.points[20].beta.components(), &[0.5]);
    }
}
