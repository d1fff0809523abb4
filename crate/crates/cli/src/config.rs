//! Run configuration: TOML file plus command-line overrides.

use latticebands::bands::SweepOptions;
use latticebands::{BandSource, BlochMomentum, EwaldConfig, ModelParams, TimeUnit};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Plotdata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub d: usize,
    pub alpha0: f64,
    pub kappa: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        let p = ModelParams::default();
        ModelSection {
            d: p.d,
            alpha0: p.alpha0,
            kappa: p.kappa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SumSection {
    /// [Re alpha, Im alpha].
    pub alpha: [f64; 2],
    /// Bloch momentum; 0.2 in every component when absent.
    pub beta: Option<Vec<f64>>,
}

impl Default for SumSection {
    fn default() -> Self {
        SumSection {
            alpha: [0.3, 0.05],
            beta: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandsSection {
    /// High-symmetry points; a d-dependent default path when absent.
    pub path: Option<Vec<String>>,
    pub points_per_segment: usize,
    pub anchor_stride: usize,
    pub reseed_every_point: bool,
}

impl Default for BandsSection {
    fn default() -> Self {
        let o = SweepOptions::default();
        BandsSection {
            path: None,
            points_per_segment: 51,
            anchor_stride: o.anchor_stride,
            reseed_every_point: o.reseed_every_point,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecaySection {
    /// Named high-symmetry points to scan.
    pub points: Vec<String>,
    /// Explicit Bloch momentum, scanned in addition to `points`.
    pub beta: Option<Vec<f64>>,
    pub alpha0_min: f64,
    pub alpha0_max: f64,
    pub step: f64,
    /// Overrides `step` with this many evenly spaced samples.
    pub samples: Option<usize>,
    pub bragg_m_max: usize,
}

impl Default for DecaySection {
    fn default() -> Self {
        DecaySection {
            points: vec!["G".into()],
            beta: None,
            alpha0_min: 0.05,
            alpha0_max: 2.0,
            step: 0.005,
            samples: None,
            bragg_m_max: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSection {
    /// Momentum grid per axis; 256 / 64 / 32 for d = 1 / 2 / 3 when absent.
    pub grid_n: Option<usize>,
    /// Half-width of the site window; grid_n / 2 when absent.
    pub window: Option<usize>,
    /// Explicit time grid; otherwise `n_times + 1` points from 0 to `t_max`.
    pub times: Option<Vec<f64>>,
    pub t_max: f64,
    pub n_times: usize,
    pub unit: TimeUnit,
    pub band: BandSource,
    pub refine_check: bool,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        DynamicsSection {
            grid_n: None,
            window: None,
            times: None,
            t_max: 10.0,
            n_times: 10,
            unit: TimeUnit::Gamma0Tau,
            band: BandSource::PoleApproximation,
            refine_check: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelftestSection {
    pub quick: bool,
    /// Relative skew of eta in the reciprocal-space half only (negative test).
    pub eta_skew: f64,
    pub seed: u64,
}

impl Default for SelftestSection {
    fn default() -> Self {
        SelftestSection {
            quick: false,
            eta_skew: 0.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Worker threads; machine parallelism when absent.
    pub workers: Option<usize>,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            format: Format::Csv,
            out: None,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub ewald: EwaldConfig,
    pub sum: SumSection,
    pub bands: BandsSection,
    pub decay: DecaySection,
    pub dynamics: DynamicsSection,
    pub selftest: SelftestSection,
    pub output: OutputSection,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub d: Option<usize>,
    pub alpha0: Option<f64>,
    pub kappa: Option<f64>,
    pub eta: Option<f64>,
    pub path: Option<Vec<String>>,
    pub grid: Option<usize>,
    pub alpha: Option<[f64; 2]>,
    pub beta: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub quick: bool,
    pub eta_skew: Option<f64>,
}

/// Which command the `--grid` and `--path` flags apply to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Sum,
    Bands,
    Decay,
    Dynamics,
    Selftest,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides, target: Target) {
        if let Some(d) = o.d {
            self.model.d = d;
        }
        if let Some(a) = o.alpha0 {
            self.model.alpha0 = a;
        }
        if let Some(k) = o.kappa {
            self.model.kappa = k;
        }
        if let Some(e) = o.eta {
            self.ewald.eta = e;
        }
        if let Some(a) = o.alpha {
            self.sum.alpha = a;
        }
        if let Some(b) = &o.beta {
            match target {
                Target::Decay => self.decay.beta = Some(b.clone()),
                _ => self.sum.beta = Some(b.clone()),
            }
        }
        if let Some(p) = &o.path {
            match target {
                Target::Decay => self.decay.points = p.clone(),
                _ => self.bands.path = Some(p.clone()),
            }
        }
        if let Some(g) = o.grid {
            match target {
                Target::Bands => self.bands.points_per_segment = g,
                Target::Decay => self.decay.samples = Some(g),
                Target::Dynamics => self.dynamics.grid_n = Some(g),
                Target::Sum | Target::Selftest => {}
            }
        }
        if let Some(p) = &o.out {
            self.output.out = Some(p.clone());
        }
        if let Some(f) = o.format {
            self.output.format = f;
        }
        if let Some(w) = o.workers {
            self.output.workers = Some(w);
        }
        if o.quick {
            self.selftest.quick = true;
        }
        if let Some(s) = o.eta_skew {
            self.selftest.eta_skew = s;
        }
    }

    pub fn params(&self) -> Result<ModelParams, String> {
        let p = ModelParams {
            alpha0: self.model.alpha0,
            kappa: self.model.kappa,
            d: self.model.d,
            ewald: self.ewald.clone(),
        };
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }

    pub fn sum_beta(&self) -> Result<BlochMomentum, String> {
        let d = self.model.d;
        let b = self.sum.beta.clone().unwrap_or_else(|| vec![0.2; d]);
        momentum(&b, d)
    }

    pub fn bands_path(&self) -> Vec<String> {
        self.bands.path.clone().unwrap_or_else(|| {
            let v: &[&str] = match self.model.d {
                1 => &["-X", "G", "X"],
                2 => &["G", "X", "M", "G"],
                _ => &["G", "X", "M", "G", "R"],
            };
            v.iter().map(|s| s.to_string()).collect()
        })
    }

    /// The alpha0 grid of the decay scan.
    pub fn decay_grid(&self) -> Result<Vec<f64>, String> {
        let s = &self.decay;
        if !(s.alpha0_min > 0.0 && s.alpha0_max > s.alpha0_min) {
            return Err(format!(
                "decay range [{}, {}] must satisfy 0 < min < max",
                s.alpha0_min, s.alpha0_max
            ));
        }
        let n = match s.samples {
            Some(n) if n >= 2 => n,
            Some(n) => return Err(format!("decay samples = {n} must be at least 2")),
            None => {
                if !(s.step > 0.0) {
                    return Err(format!("decay step = {} must be positive", s.step));
                }
                ((s.alpha0_max - s.alpha0_min) / s.step + 1e-9).floor() as usize + 1
            }
        };
        let h = match s.samples {
            Some(_) => (s.alpha0_max - s.alpha0_min) / (n - 1) as f64,
            None => s.step,
        };
        Ok((0..n).map(|i| s.alpha0_min + h * i as f64).collect())
    }

    pub fn grid_n(&self) -> usize {
        self.dynamics.grid_n.unwrap_or(match self.model.d {
            1 => 256,
            2 => 64,
            _ => 32,
        })
    }

    pub fn window(&self) -> usize {
        self.dynamics.window.unwrap_or(self.grid_n() / 2)
    }
}

pub fn momentum(b: &[f64], d: usize) -> Result<BlochMomentum, String> {
    if b.len() != d {
        return Err(format!("beta has {} components but d = {d}", b.len()));
    }
    BlochMomentum::new(b).map_err(|e| e.to_string())
}
