//! `latticebands`: lattice sums, complex band structures, decay scans and
//! wavepacket dynamics from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;
mod selftest;

use clap::{Args, Parser, Subcommand};
use config::{Format, Overrides, RunConfig, Target};
use report::Report;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(latticebands::Error),
    Io(io::Error),
    Selftest(String),
}

impl From<latticebands::Error> for CliError {
    fn from(e: latticebands::Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Selftest(m) => write!(f, "selftest failed: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use latticebands::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Compute(E::Invalid(_) | E::Domain { .. }) => 1,
            CliError::Compute(E::Singularity { .. }) => 2,
            CliError::Compute(E::NonConvergence { .. } | E::Overflow { .. }) => 3,
            CliError::Selftest(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "latticebands",
    version,
    about = "Lattice sums, complex bands and collective decay of atomic lattices"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML configuration file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Lattice dimension (1, 2 or 3)
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Atomic transition in units of 2 pi c / a
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha0: Option<f64>,
    /// Coupling strength
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Ewald splitting parameter
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Comma-separated high-symmetry points (G, X, M, R, optionally prefixed with -)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    path: Option<Vec<String>>,
    /// Points per segment (bands), samples (decay) or grid size N (dynamics)
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output file (stdout if omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Print the effective configuration as TOML and exit
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate S(alpha, beta) and its decomposition
    Sum {
        /// Complex alpha as re,im
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_negative_numbers = true
        )]
        alpha: Option<Vec<f64>>,
        /// Bloch momentum components, comma-separated
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        beta: Option<Vec<f64>>,
    },
    /// Complex band structure along a Brillouin-zone path
    Bands,
    /// Decay rate of the atom-like band versus lattice spacing
    Decay {
        /// Extra Bloch momentum to scan, comma-separated
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        beta: Option<Vec<f64>>,
    },
    /// Evolution of a point-source excitation
    Dynamics,
    /// Run the built-in oracle suite
    Selftest {
        /// Reduced sample counts (finishes within a minute)
        #[arg(long)]
        quick: bool,
        /// Perturb the reciprocal-space eta by this relative amount (negative test)
        #[arg(long, allow_negative_numbers = true)]
        inject_eta_skew: Option<f64>,
    },
}

fn build_config(cli: &Cli) -> Result<(RunConfig, Target), CliError> {
    let c = &cli.common;
    let mut o = Overrides {
        d: c.d,
        alpha0: c.alpha0,
        kappa: c.kappa,
        eta: c.eta,
        path: c.path.clone(),
        grid: c.grid,
        out: c.out.clone(),
        format: c.format,
        workers: c.workers,
        ..Default::default()
    };
    let target = match &cli.command {
        Command::Sum { alpha, beta } => {
            if let Some(a) = alpha {
                let [re, im] = a[..] else {
                    return Err(CliError::Config("--alpha expects re,im".into()));
                };
                o.alpha = Some([re, im]);
            }
            o.beta = beta.clone();
            Target::Sum
        }
        Command::Bands => Target::Bands,
        Command::Decay { beta } => {
            o.beta = beta.clone();
            Target::Decay
        }
        Command::Dynamics => Target::Dynamics,
        Command::Selftest {
            quick,
            inject_eta_skew,
        } => {
            o.quick = *quick;
            o.eta_skew = *inject_eta_skew;
            Target::Selftest
        }
    };
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p).map_err(CliError::Config)?,
        None => RunConfig::default(),
    };
    cfg.apply(&o, target);
    cfg.params().map_err(CliError::Config)?;
    Ok((cfg, target))
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn summary_path(p: &Path) -> PathBuf {
    let stem = p
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match p.extension() {
        Some(e) => format!("{stem}.summary.{}", e.to_string_lossy()),
        None => format!("{stem}.summary"),
    };
    p.with_file_name(name)
}

fn emit(rep: &Report, cfg: &RunConfig) -> Result<(), CliError> {
    let f = cfg.output.format;
    let out = cfg.output.out.as_deref();
    match (rep.command.as_str(), out, f) {
        // frames and summary have different columns: split them across files
        ("dynamics", Some(p), Format::Csv | Format::Plotdata) => {
            let mut w = open(Some(p))?;
            rep.render_tables(f, &["frames"], &mut w)?;
            w.flush()?;
            let mut s = open(Some(&summary_path(p)))?;
            rep.render_tables(f, &["summary"], &mut s)?;
            s.flush()?;
        }
        _ => {
            let mut w = open(out)?;
            rep.render(f, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, target) = build_config(&cli)?;
    if cli.common.dump_config {
        let mut w = open(cfg.output.out.as_deref())?;
        w.write_all(cfg.to_toml().as_bytes())?;
        w.flush()?;
        return Ok(());
    }
    if let Some(n) = cfg.output.workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match target {
        Target::Sum => emit(&commands::sum(&cfg)?, &cfg),
        Target::Bands => {
            let (rep, frac) = commands::bands(&cfg)?;
            emit(&rep, &cfg)?;
            if frac < 0.95 {
                return Err(CliError::Compute(latticebands::Error::NonConvergence {
                    what: "band sweep".into(),
                    msg: format!("only {:.1}% of points converged", 100.0 * frac),
                }));
            }
            Ok(())
        }
        Target::Decay => emit(&commands::decay(&cfg)?, &cfg),
        Target::Dynamics => emit(&commands::dynamics(&cfg)?, &cfg),
        Target::Selftest => {
            let (rep, results) = selftest::run(&cfg);
            emit(&rep, &cfg)?;
            let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Selftest(format!(
                    "invariant(s) violated: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LATTICEBANDS_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("latticebands: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
