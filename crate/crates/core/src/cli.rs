//! Command-line driver: experiments in, CSV or JSON records out.
//!
//! Exit codes: 0 success, 64 usage, 65 data or fit failure, 2 capacity.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::eof::{self, EofOptions, EofResult};
use crate::error::{Error, Result};
use crate::linalg;
use crate::oracles::{BenchmarkInstance, Family};
use crate::scaling::{self, ScalingDataset, ScalingPoint, ZScan};
use crate::spin_models::{self, ModelSpec, SpectrumSlice};
use crate::tto::{self, Bipartition, PurificationFactor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column order of the CSV output.
pub const RECORD_FIELDS: [&str; 13] = [
    "command",
    "parameters",
    "E_F",
    "exact_eof",
    "abs_error",
    "K0",
    "K",
    "M",
    "evaluations",
    "wall_time_seconds",
    "converged",
    "seed",
    "artifact_version",
];

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => EXIT_CAPACITY,
        Error::Usage(_) | Error::InvalidInput(_) | Error::Unsupported(_) => EXIT_USAGE,
        Error::DegenerateFit(_) | Error::Data(_) | Error::Io(_) => EXIT_DATA,
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub eof: f64,
    pub exact_eof: Option<f64>,
    pub abs_error: Option<f64>,
    pub k0: usize,
    pub k: usize,
    pub m: Option<usize>,
    pub evaluations: usize,
    pub wall_time_seconds: Option<f64>,
    pub converged: bool,
    pub seed: u64,
    pub artifact_version: String,
}

/// Round-trip-safe float text (17 significant digits).
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl ResultRecord {
    fn from_result(command: &str, parameters: Vec<(String, String)>, r: &EofResult, exact: Option<f64>, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            eof: r.value,
            exact_eof: exact,
            abs_error: exact.map(|e| (r.value - e).abs()),
            k0: r.k0,
            k: r.k,
            m: r.m,
            evaluations: r.evaluations,
            wall_time_seconds: Some(r.wall_time),
            converged: r.converged,
            seed,
            artifact_version: ARTIFACT_VERSION.to_string(),
        }
    }

    pub fn parameter(&self, key: &str) -> Option<&str> {
        self.parameters.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn flat_parameters(&self) -> String {
        self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    pub fn csv_row(&self) -> Vec<String> {
        let opt_f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        vec![
            self.command.clone(),
            self.flat_parameters(),
            format_float(self.eof),
            opt_f(self.exact_eof),
            opt_f(self.abs_error),
            self.k0.to_string(),
            self.k.to_string(),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.evaluations.to_string(),
            opt_f(self.wall_time_seconds),
            self.converged.to_string(),
            self.seed.to_string(),
            self.artifact_version.clone(),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<String, serde_json::Value> =
            self.parameters.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
        serde_json::json!({
            "command": self.command,
            "parameters": params,
            "E_F": self.eof,
            "exact_eof": self.exact_eof,
            "abs_error": self.abs_error,
            "K0": self.k0,
            "K": self.k,
            "M": self.m,
            "evaluations": self.evaluations,
            "wall_time_seconds": self.wall_time_seconds,
            "converged": self.converged,
            "seed": self.seed,
            "artifact_version": self.artifact_version,
        })
    }

    fn from_csv(headers: &csv::StringRecord, row: &csv::StringRecord) -> Result<Self> {
        let get = |name: &str| -> Result<&str> {
            headers
                .iter()
                .position(|h| h == name)
                .and_then(|i| row.get(i))
                .ok_or_else(|| Error::Data(format!("missing column {name}")))
        };
        let num = |name: &str| -> Result<f64> { get(name)?.parse().map_err(|_| Error::Data(format!("bad {name}"))) };
        let opt = |name: &str| -> Result<Option<f64>> {
            let s = get(name)?;
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| Error::Data(format!("bad {name}")))
            }
        };
        let int = |name: &str| -> Result<usize> { get(name)?.parse().map_err(|_| Error::Data(format!("bad {name}"))) };
        let parameters = get("parameters")?
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| Error::Data(format!("bad parameter {kv}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = get("M")?;
        Ok(Self {
            command: get("command")?.to_string(),
            parameters,
            eof: num("E_F")?,
            exact_eof: opt("exact_eof")?,
            abs_error: opt("abs_error")?,
            k0: int("K0")?,
            k: int("K")?,
            m: if m.is_empty() { None } else { Some(m.parse().map_err(|_| Error::Data("bad M".into()))?) },
            evaluations: int("evaluations")?,
            wall_time_seconds: opt("wall_time_seconds")?,
            converged: get("converged")? == "true",
            seed: get("seed")?.parse().map_err(|_| Error::Data("bad seed".into()))?,
            artifact_version: get("artifact_version")?.to_string(),
        })
    }
}

pub fn write_csv(records: &[ResultRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_FIELDS).map_err(csv_err)?;
    for r in records {
        w.write_record(r.csv_row()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = r.headers().map_err(csv_err)?.clone();
    r.records().map(|row| ResultRecord::from_csv(&headers, &row.map_err(csv_err)?)).collect()
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Data(format!("{other:?}")),
        }
    } else {
        Error::Data(e.to_string())
    }
}

/// Inclusive `a:b:step` range or comma list of reals.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return usage("empty list");
    }
    let bad = || Error::Usage(format!("malformed list or range '{s}'"));
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
        let [a, b, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
            return Err(bad());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        // rounded to 12 decimals so 0.1-steps print as written
        return Ok((0..=n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect());
    }
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad()).and_then(|v| if v.is_finite() { Ok(v) } else { Err(bad()) })).collect()
}

/// Inclusive `a:b:step` range or comma list of counts.
pub fn parse_count_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return usage("empty list");
    }
    let bad = || Error::Usage(format!("malformed list or range '{s}'"));
    if s.contains(':') {
        let parts: Vec<usize> = s.split(':').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
        let [a, b, step] = parts[..] else { return Err(bad()) };
        if step == 0 || b < a {
            return Err(bad());
        }
        return Ok((a..=b).step_by(step).collect());
    }
    s.split(',').map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `1..=16`, then coarser steps, always ending at `exact`.
pub fn default_bond_list(exact: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=16).chain([20, 24, 28, 32, 40, 48, 56, 64, 96, 128]).filter(|&m| m < exact).collect();
    v.push(exact);
    v
}

#[derive(Parser, Debug)]
#[command(name = "tto-eof", version, about = "Entanglement of formation of mixed states through tree tensor operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// EoF of thermal states of a spin chain over an (N, T) grid.
    ThermalEof(ThermalArgs),
    /// EoF of benchmark families against exact references.
    Bench(BenchArgs),
    /// EoF versus the number of retained eigenstates.
    ScanK0(ScanK0Args),
    /// EoF versus the TTO bond dimension.
    ScanM(ScanMArgs),
    /// Finite-size collapse of thermal-eof output.
    Scaling(ScalingArgs),
    /// Optimization time per objective evaluation versus size.
    Timing(TimingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads (default 1, or the THREADS environment variable).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write wall-clock times into records.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    #[arg(long = "max-evals")]
    pub max_evals: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub ftol: f64,
    /// Edge length of the starting simplex.
    #[arg(long = "initial-step", default_value_t = 0.5)]
    pub initial_step: f64,
    /// Standard deviation of restart kicks.
    #[arg(long, default_value_t = 1.0)]
    pub perturbation: f64,
    /// Rebuild the simplex every this many multiples of the parameter count.
    #[arg(long = "rebuild-every")]
    pub rebuild_every: Option<usize>,
    /// Flat key=value file; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Common {
    fn eof_options(&self, seed: u64) -> EofOptions {
        EofOptions {
            max_evals: self.max_evals,
            restarts: self.restarts,
            seed,
            ftol: self.ftol,
            initial_step: self.initial_step,
            perturbation: self.perturbation,
            rebuild_every: self.rebuild_every,
            ..Default::default()
        }
    }

    fn base_parameters(&self) -> Vec<(String, String)> {
        let mut p = vec![("restarts".to_string(), self.restarts.to_string()), ("ftol".to_string(), format!("{:e}", self.ftol))];
        if let Some(m) = self.max_evals {
            p.push(("max_evals".into(), m.to_string()));
        }
        if self.initial_step != 0.5 {
            p.push(("initial_step".into(), format!("{:e}", self.initial_step)));
        }
        if self.perturbation != 1.0 {
            p.push(("perturbation".into(), format!("{:e}", self.perturbation)));
        }
        if let Some(r) = self.rebuild_every {
            p.push(("rebuild_every".into(), r.to_string()));
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Ising,
    Xxz,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelName::Ising)]
    pub model: ModelName,
    /// Transverse field (Ising only; default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Anisotropy (XXZ only; default 0.5).
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    /// Site counts, list or a:b:step.
    #[arg(long = "N")]
    pub sites: String,
}

impl ModelArgs {
    fn specs(&self) -> Result<Vec<ModelSpec>> {
        let sizes = parse_count_list(&self.sites)?;
        sizes.into_iter().map(|n| self.spec(n)).collect()
    }

    fn spec(&self, n: usize) -> Result<ModelSpec> {
        match self.model {
            ModelName::Ising => {
                if self.xi.is_some() {
                    return usage("--xi belongs to the xxz model");
                }
                ModelSpec::ising(n, self.h.unwrap_or(1.0))
            }
            ModelName::Xxz => {
                if self.h.is_some() {
                    return usage("--h belongs to the ising model");
                }
                ModelSpec::xxz(n, self.xi.unwrap_or(0.5))
            }
        }
    }
}

fn model_parameters(spec: &ModelSpec) -> Vec<(String, String)> {
    match spec.kind {
        spin_models::ModelKind::Ising { field } => vec![("model".into(), "ising".into()), ("h".into(), field.to_string())],
        spin_models::ModelKind::Xxz { anisotropy } => vec![("model".into(), "xxz".into()), ("xi".into(), anisotropy.to_string())],
    }
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ThermalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Temperatures, list or a:b:step.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub temperatures: Option<String>,
    /// Temperatures as multiples of the finite-size gap of each N.
    #[arg(long = "T-gap")]
    pub gap_fractions: Option<String>,
    /// Retained eigenstates; chosen from the Boltzmann weight when absent.
    #[arg(long = "K0")]
    pub k0: Option<usize>,
    /// Decomposition size (at least K0).
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Bond dimension; exact when absent.
    #[arg(long = "M")]
    pub bond: Option<usize>,
    /// Boltzmann weight covered by the automatic K0.
    #[arg(long, default_value_t = 0.99)]
    pub weight: f64,
    #[arg(long = "K0-max", default_value_t = 8)]
    pub k0_max: usize,
    /// Optimize on the full purification instead of the TTO root.
    #[arg(long = "full-x")]
    pub full_x: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct BenchArgs {
    /// bell, ghz, random-pure, hs-random, separable, werner or isotropic.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long = "N")]
    pub sites: Option<usize>,
    #[arg(long = "K0")]
    pub k0: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub instances: usize,
    /// Searches decompositions of size K0 + extra-k.
    #[arg(long = "extra-k", default_value_t = 0)]
    pub extra_k: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ScanK0Args {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "T")]
    pub temperature: f64,
    #[arg(long = "K0-max", default_value_t = 6)]
    pub k0_max: usize,
    #[arg(long = "M")]
    pub bond: Option<usize>,
    #[arg(long = "extra-k", default_value_t = 0)]
    pub extra_k: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ScanMArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "T")]
    pub temperature: f64,
    #[arg(long = "K0")]
    pub k0: Option<usize>,
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Bond dimensions; must reach the exact value.
    #[arg(long = "M")]
    pub bonds: Option<String>,
    /// Also optimize on the full purification and emit it as a row.
    #[arg(long = "full-x")]
    pub full_x: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct ScalingArgs {
    /// CSV written by thermal-eof.
    #[arg(long)]
    pub input: PathBuf,
    /// Fixed c; taken from the model when absent.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long = "z-range", default_value = "0:2:0.001")]
    pub z_range: String,
    /// Fit c as well, over --c-range.
    #[arg(long)]
    pub joint: bool,
    #[arg(long = "c-range", default_value = "0:2:0.01")]
    pub c_range: String,
    /// Drops points above this multiple of the gap.
    #[arg(long = "max-T-gap")]
    pub max_t_gap: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimingMode {
    FullX,
    TtoRoot,
}

#[derive(Args, Debug, Clone)]
#[command(args_override_self = true)]
pub struct TimingArgs {
    #[arg(long, value_enum)]
    pub mode: TimingMode,
    /// Sizes for full-x mode.
    #[arg(long = "N", default_value = "6:12:1")]
    pub sites: String,
    /// Bond dimensions for tto-root mode.
    #[arg(long = "M", default_value = "8,12,16,24,32,48,64")]
    pub bonds: String,
    /// Size used in tto-root mode.
    #[arg(long = "fixed-N", default_value_t = 12)]
    pub fixed_sites: usize,
    #[arg(long = "T", default_value_t = 0.1)]
    pub temperature: f64,
    #[arg(long = "K0", default_value_t = 2)]
    pub k0: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub h: f64,
    /// Runs per point; the fastest is kept.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[command(flatten)]
    pub common: Common,
}

/// A command's rows plus free-form summary lines for stderr.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub records: Vec<ResultRecord>,
    pub summary: Vec<String>,
}

/// Expands `--config FILE` into flags placed right after the subcommand,
/// so flags given on the command line win.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut out = Vec::with_capacity(args.len());
    let mut config: Option<PathBuf> = None;
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy().to_string();
        if s == "--config" {
            let path = iter.next().ok_or_else(|| Error::Usage("--config needs a path".into()))?;
            config = Some(PathBuf::from(path));
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else {
            out.push(a);
        }
    }
    let Some(path) = config else { return Ok(out) };
    let text = fs::read_to_string(&path).map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {} is not key=value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match v {
            "true" => extra.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => extra.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    let at = out.len().min(2);
    out.splice(at..at, extra);
    Ok(out)
}

fn worker_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return if n == 0 { usage("--workers must be at least 1") } else { Ok(n) };
    }
    match std::env::var("THREADS") {
        Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| Error::Usage(format!("THREADS={v} is not a positive count"))),
        Err(_) => Ok(1),
    }
}

/// Runs jobs on a pool of `workers` threads; output keeps the job order.
fn run_jobs<J: Sync, T: Send>(workers: usize, jobs: &[J], f: impl Fn(usize, &J) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::Usage(e.to_string()))?;
    pool.install(|| jobs.par_iter().enumerate().map(|(i, j)| f(i, j)).collect())
}

fn spectrum_for(spec: &ModelSpec, k: usize) -> Result<SpectrumSlice> {
    spin_models::model_spectrum(spec, k.min(spec.dim()))
}

/// `(N, spectrum, gap)` per requested size.
fn spectra(specs: &[ModelSpec], k: usize, workers: usize) -> Result<Vec<(ModelSpec, SpectrumSlice, f64)>> {
    run_jobs(workers, specs, |_, s| {
        let slice = spectrum_for(s, k)?;
        let gap = spin_models::finite_size_gap(&slice)?;
        Ok((*s, slice, gap))
    })
}

fn thermal_points(args: &ThermalArgs, gap: f64) -> Result<Vec<(f64, Option<f64>)>> {
    match (&args.temperatures, &args.gap_fractions) {
        (Some(t), None) => Ok(parse_real_list(t)?.into_iter().map(|t| (t, None)).collect()),
        (None, Some(g)) => Ok(parse_real_list(g)?.into_iter().map(|f| (f * gap, Some(f))).collect()),
        (Some(_), Some(_)) => usage("give either --T or --T-gap"),
        (None, None) => usage("a temperature list (--T or --T-gap) is required"),
    }
}

fn optimize_thermal(x: &PurificationFactor, bond: Option<usize>, k: usize, full_x: bool, opts: &EofOptions) -> Result<EofResult> {
    if full_x {
        return eof::eof_of_factor(x, k, opts);
    }
    let bond = bond.unwrap_or_else(|| eof::exact_bond(x.sites(), x.local_dim()));
    let tto = tto::compress_to_root(x, Bipartition::half(x.sites()), bond)?;
    eof::eof_of_root(&tto, k, opts)
}

pub fn thermal_eof(args: &ThermalArgs) -> Result<Report> {
    let workers = worker_count(args.common.workers)?;
    let specs = args.model.specs()?;
    if let Some(t) = &args.temperatures {
        parse_real_list(t)?;
    }
    if let Some(g) = &args.gap_fractions {
        parse_real_list(g)?;
    }
    if args.temperatures.is_none() && args.gap_fractions.is_none() {
        return usage("a temperature list (--T or --T-gap) is required");
    }
    if args.k0 == Some(0) || args.k.is_some_and(|k| args.k0.is_some_and(|k0| k < k0)) {
        return usage("need 1 <= K0 <= K");
    }
    if !(args.weight > 0.0 && args.weight <= 1.0) {
        return usage("--weight must lie in (0, 1]");
    }
    let k_needed = args.k0.unwrap_or(args.k0_max).max(2) + 16;
    let sp = spectra(&specs, k_needed, workers)?;
    let mut jobs = Vec::new();
    for (si, (_, _, gap)) in sp.iter().enumerate() {
        for (t, frac) in thermal_points(args, *gap)? {
            if !(t > 0.0) {
                return usage(format!("temperatures must be positive, got {t}"));
            }
            jobs.push((si, t, frac));
        }
    }
    let records = run_jobs(workers, &jobs, |i, &(si, t, frac)| {
        let (spec, slice, gap) = &sp[si];
        let k0 = match args.k0 {
            Some(k0) => k0,
            None => spin_models::kraus_dimension_for_weight(&slice.energies, t, args.weight, 1, args.k0_max),
        };
        let x = spin_models::thermal_from_spectrum(slice, spec.sites, t, k0)?;
        let k = args.k.unwrap_or(0).max(x.kraus_dim());
        let seed = linalg::derive_seed(args.common.seed, i as u64);
        let r = optimize_thermal(&x, args.bond, k, args.full_x, &args.common.eof_options(seed))?;
        let mut params = model_parameters(spec);
        params.push(("N".into(), spec.sites.to_string()));
        params.push(("T".into(), format_float(t)));
        params.push(("gap".into(), format_float(*gap)));
        if let Some(f) = frac {
            params.push(("T_over_gap".into(), f.to_string()));
        }
        params.push(("mode".into(), if args.full_x { "full-x" } else { "tto-root" }.into()));
        params.extend(args.common.base_parameters());
        Ok(ResultRecord::from_result("thermal-eof", params, &r, None, args.common.seed))
    })?;
    Ok(Report { records, summary: Vec::new() })
}

fn bench_instance(args: &BenchArgs, family: Family, index: usize, value: Option<f64>) -> Result<BenchmarkInstance> {
    let seed = linalg::derive_seed(args.common.seed, index as u64);
    match family {
        Family::BellMixture => BenchmarkInstance::bell(value.unwrap_or(0.5)),
        Family::GhzMixture => BenchmarkInstance::ghz(args.sites.unwrap_or(4), value.unwrap_or(0.5)),
        Family::RandomPureEnsemble => BenchmarkInstance::random_pure(args.sites.unwrap_or(2), args.k0.unwrap_or(2), seed),
        Family::HilbertSchmidtRandom => BenchmarkInstance::hs_random(args.dim.unwrap_or(4), seed),
        Family::RandomSeparable => BenchmarkInstance::separable(args.sites.unwrap_or(2), seed),
        Family::Werner => BenchmarkInstance::werner(args.d.unwrap_or(2), value.unwrap_or(0.0)),
        Family::Isotropic => BenchmarkInstance::isotropic(args.d.unwrap_or(2), value.unwrap_or(0.0)),
    }
}

pub fn bench(args: &BenchArgs) -> Result<Report> {
    let workers = worker_count(args.common.workers)?;
    let family = Family::parse(&args.family).ok_or_else(|| Error::Usage(format!("unsupported family '{}'", args.family)))?;
    let grid: Vec<Option<f64>> = match family {
        Family::BellMixture | Family::GhzMixture => parse_real_list(args.lambda.as_deref().unwrap_or("0:1:0.1"))?.into_iter().map(Some).collect(),
        Family::Werner => parse_real_list(args.f.as_deref().unwrap_or("-1:1:0.25"))?.into_iter().map(Some).collect(),
        Family::Isotropic => parse_real_list(args.f.as_deref().unwrap_or("0:1:0.125"))?.into_iter().map(Some).collect(),
        _ => {
            if args.instances == 0 {
                return usage("--instances must be at least 1");
            }
            vec![None; args.instances]
        }
    };
    let records = run_jobs(workers, &grid, |i, value| {
        let inst = bench_instance(args, family, i, *value)?;
        let opt_seed = linalg::derive_seed(linalg::derive_seed(args.common.seed, i as u64), u64::MAX);
        let r = inst.solve(args.extra_k, &args.common.eof_options(opt_seed))?;
        let mut params = vec![("family".to_string(), family.name().to_string())];
        params.extend(inst.parameters.iter().cloned());
        params.push(("instance".into(), i.to_string()));
        if let Some(src) = inst.exact_source {
            params.push(("exact_source".into(), src.label().into()));
        }
        params.push(("extra_k".into(), args.extra_k.to_string()));
        params.extend(args.common.base_parameters());
        Ok(ResultRecord::from_result("bench", params, &r, inst.exact_eof, args.common.seed))
    })?;
    let summary = vec![bench_summary(&records)];
    Ok(Report { records, summary })
}

/// `max/median |error|` and the separable share of a bench run.
pub fn bench_summary(records: &[ResultRecord]) -> String {
    let mut errors: Vec<f64> = records.iter().filter_map(|r| r.abs_error).collect();
    errors.sort_by(f64::total_cmp);
    let max = errors.last().copied();
    let median = if errors.is_empty() {
        None
    } else if errors.len() % 2 == 1 {
        Some(errors[errors.len() / 2])
    } else {
        Some(0.5 * (errors[errors.len() / 2 - 1] + errors[errors.len() / 2]))
    };
    let separable = records.iter().filter(|r| r.exact_eof.map_or(r.eof < 1e-6, |e| e <= 1e-12)).count();
    let f = |v: Option<f64>| v.map(format_float).unwrap_or_else(|| "n/a".into());
    format!(
        "summary records={} max_abs_error={} median_abs_error={} separable_fraction={}",
        records.len(),
        f(max),
        f(median),
        format_float(separable as f64 / records.len().max(1) as f64)
    )
}

/// Relative change within which a scan row counts as converged.
pub const SCAN_CONVERGENCE: f64 = 0.01;

pub fn scan_k0(args: &ScanK0Args) -> Result<Report> {
    let workers = worker_count(args.common.workers)?;
    let specs = args.model.specs()?;
    if args.k0_max == 0 {
        return usage("--K0-max must be at least 1");
    }
    if !(args.temperature > 0.0) {
        return usage("--T must be positive");
    }
    let sp = spectra(&specs, args.k0_max + 16, workers)?;
    let tables = run_jobs(workers, &sp, |i, (spec, slice, gap)| {
        let seed = linalg::derive_seed(args.common.seed, i as u64);
        let rows = eof::scan_k0(slice, spec.sites, args.temperature, args.k0_max, args.bond, args.extra_k, &args.common.eof_options(seed))?;
        Ok((*spec, *gap, rows))
    })?;
    let mut report = Report::default();
    for (spec, gap, rows) in tables {
        let last = rows.last().map(|r| r.eof).unwrap_or(0.0);
        let rel = |e: f64| (e - last).abs() / last.abs().max(1e-12);
        let plateau = rows.iter().rposition(|r| rel(r.eof) > SCAN_CONVERGENCE).map_or(0, |p| p + 1);
        let plateau_k0 = rows.get(plateau).map(|r| r.k0);
        for (j, row) in rows.iter().enumerate() {
            let mut params = model_parameters(&spec);
            params.push(("N".into(), spec.sites.to_string()));
            params.push(("T".into(), format_float(args.temperature)));
            params.push(("gap".into(), format_float(gap)));
            params.push(("rel_change".into(), format_float(rel(row.eof))));
            params.push(("plateau".into(), (j >= plateau).to_string()));
            params.extend(args.common.base_parameters());
            report.records.push(ResultRecord {
                command: "scan-k0".into(),
                parameters: params,
                eof: row.eof,
                exact_eof: None,
                abs_error: None,
                k0: row.k0,
                k: row.k,
                m: Some(args.bond.unwrap_or_else(|| eof::exact_bond(spec.sites, spec.local_dim()))),
                evaluations: row.evaluations,
                wall_time_seconds: None,
                converged: row.converged,
                seed: args.common.seed,
                artifact_version: ARTIFACT_VERSION.into(),
            });
        }
        report.summary.push(format!(
            "summary N={} plateau_K0={}",
            spec.sites,
            plateau_k0.map(|k| k.to_string()).unwrap_or_else(|| "n/a".into())
        ));
    }
    Ok(report)
}

pub fn scan_m(args: &ScanMArgs) -> Result<Report> {
    let workers = worker_count(args.common.workers)?;
    let specs = args.model.specs()?;
    if !(args.temperature > 0.0) {
        return usage("--T must be positive");
    }
    let bond_lists: Vec<Vec<usize>> = specs
        .iter()
        .map(|s| match &args.bonds {
            Some(b) => parse_count_list(b),
            None => Ok(default_bond_list(eof::exact_bond(s.sites, s.local_dim()))),
        })
        .collect::<Result<_>>()?;
    let k0_req = args.k0.unwrap_or(2);
    if k0_req == 0 {
        return usage("--K0 must be at least 1");
    }
    let sp = spectra(&specs, k0_req + 16, workers)?;
    let mut report = Report::default();
    for (i, ((spec, slice, gap), bonds)) in sp.iter().zip(&bond_lists).enumerate() {
        let x = spin_models::thermal_from_spectrum(slice, spec.sites, args.temperature, k0_req)?;
        let k = args.k.unwrap_or(0).max(x.kraus_dim());
        let opts = args.common.eof_options(linalg::derive_seed(args.common.seed, i as u64));
        let scan = eof::scan_m(&x, bonds, k, &opts)?;
        let base = |extra: Vec<(String, String)>| {
            let mut p = model_parameters(spec);
            p.push(("N".into(), spec.sites.to_string()));
            p.push(("T".into(), format_float(args.temperature)));
            p.push(("gap".into(), format_float(*gap)));
            p.extend(extra);
            p.extend(args.common.base_parameters());
            p
        };
        for row in &scan.rows {
            let rel = (row.eof - scan.reference).abs() / scan.reference.abs().max(1e-12);
            report.records.push(ResultRecord {
                command: "scan-m".into(),
                parameters: base(vec![
                    ("mode".into(), "tto-root".into()),
                    ("discarded_weight".into(), format_float(row.discarded_weight)),
                    ("rel_change".into(), format_float(rel)),
                    ("converged_99".into(), scan.m_star.is_some_and(|m| row.bond >= m).to_string()),
                ]),
                eof: row.eof,
                exact_eof: None,
                abs_error: None,
                k0: x.kraus_dim(),
                k,
                m: Some(row.bond),
                evaluations: row.evaluations,
                wall_time_seconds: None,
                converged: true,
                seed: args.common.seed,
                artifact_version: ARTIFACT_VERSION.into(),
            });
        }
        if args.full_x {
            let r = eof::eof_of_factor(&x, k, &opts)?;
            let mut rec = ResultRecord::from_result("scan-m", base(vec![("mode".into(), "full-x".into())]), &r, None, args.common.seed);
            rec.wall_time_seconds = None;
            report.records.push(rec);
        }
        report.summary.push(format!(
            "summary N={} M_star={} reference={}",
            spec.sites,
            scan.m_star.map(|m| m.to_string()).unwrap_or_else(|| "n/a".into()),
            format_float(scan.reference)
        ));
    }
    Ok(report)
}

/// Key/value rows of a fit, in output order.
pub fn scaling(args: &ScalingArgs) -> Result<Vec<(String, String)>> {
    let records = read_csv(&args.input)?;
    let to_data = |e: Error| match e {
        Error::InvalidInput(m) => Error::Data(m),
        other => other,
    };
    let mut points = Vec::new();
    let mut gaps = BTreeMap::new();
    let mut model = None;
    for r in &records {
        let n: usize = r.parameter("N").and_then(|v| v.parse().ok()).ok_or_else(|| Error::Data("record without N".into()))?;
        let t: f64 = r.parameter("T").and_then(|v| v.parse().ok()).ok_or_else(|| Error::Data("record without T".into()))?;
        let gap: Option<f64> = r.parameter("gap").and_then(|v| v.parse().ok());
        if let Some(g) = gap {
            gaps.insert(n, g);
        }
        if let (Some(limit), Some(g)) = (args.max_t_gap, gap) {
            if t > limit * g * (1.0 + 1e-9) {
                continue;
            }
        }
        model = model.or(r.parameter("model").map(str::to_string));
        points.push(ScalingPoint { sites: n, temperature: t, eof: r.eof });
    }
    let data = ScalingDataset::new(points, model.clone().unwrap_or_default()).map_err(to_data)?;
    let c = match (args.c, model.as_deref()) {
        (Some(c), _) => c,
        (None, Some("ising")) => 0.5,
        (None, Some("xxz")) => 1.0,
        (None, _) => return usage("--c is required when the input names no model"),
    };
    let zg = parse_real_list(&args.z_range)?;
    if zg.len() < 2 {
        return usage("--z-range needs a:b:step");
    }
    let range = ZScan { lo: zg[0], hi: *zg.last().unwrap_or(&zg[0]), step: zg[1] - zg[0] };
    let fit = if args.joint {
        scaling::collapse_fit_joint(&data, &parse_real_list(&args.c_range)?, range)
    } else {
        scaling::collapse_fit(&data, c, range)
    }
    .map_err(to_data)?;
    let mut out = vec![
        ("model".to_string(), data.model_tag.clone()),
        ("sizes".into(), data.sizes().iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";")),
        ("c".into(), format_float(fit.c)),
        ("z".into(), format_float(fit.z)),
        ("z_err".into(), format_float(fit.z_err)),
        ("collapse_residual".into(), format_float(fit.collapse_residual)),
        ("residual_at_zero".into(), fit.residual_at_zero.map(format_float).unwrap_or_default()),
    ];
    if let Ok(rows) = scaling::plateau_check(&data, &gaps) {
        for row in rows {
            out.push((format!("plateau_ratio[N={}]", row.sites), format_float(row.ratio)));
            out.push((format!("plateau_flag[N={}]", row.sites), row.flagged.to_string()));
        }
    }
    for (i, (x, y)) in fit.g_table.iter().enumerate() {
        out.push((format!("g[{i}]"), format!("{};{}", format_float(*x), format_float(*y))));
    }
    Ok(out)
}

pub fn timing(args: &TimingArgs) -> Result<Report> {
    let workers = worker_count(args.common.workers)?;
    if args.repeats == 0 || args.k0 == 0 {
        return usage("--repeats and --K0 must be at least 1");
    }
    let sizes = match args.mode {
        TimingMode::FullX => parse_count_list(&args.sites)?,
        TimingMode::TtoRoot => vec![args.fixed_sites],
    };
    let bonds = parse_count_list(&args.bonds)?;
    let specs: Vec<ModelSpec> = sizes.iter().map(|&n| ModelSpec::ising(n, args.h)).collect::<Result<_>>()?;
    let sp = spectra(&specs, args.k0 + 16, workers)?;
    let mut jobs: Vec<(usize, Option<usize>)> = Vec::new();
    for si in 0..sp.len() {
        match args.mode {
            TimingMode::FullX => jobs.push((si, None)),
            TimingMode::TtoRoot => jobs.extend(bonds.iter().map(|&m| (si, Some(m)))),
        }
    }
    // timings are taken one job at a time
    let records = run_jobs(1, &jobs, |i, &(si, bond)| {
        let (spec, slice, gap) = &sp[si];
        let x = spin_models::thermal_from_spectrum(slice, spec.sites, args.temperature, args.k0)?;
        let k = x.kraus_dim();
        let opts = args.common.eof_options(linalg::derive_seed(args.common.seed, i as u64));
        let mut best: Option<EofResult> = None;
        for _ in 0..args.repeats {
            let r = match bond {
                None => eof::eof_of_factor(&x, k, &opts)?,
                Some(m) => {
                    let tto = tto::compress_to_root_with_tol(&x, Bipartition::half(spec.sites), m, 0.0)?;
                    eof::eof_of_root(&tto, k, &opts)?
                }
            };
            let per = |r: &EofResult| r.wall_time / r.evaluations.max(1) as f64;
            if best.as_ref().is_none_or(|b| per(&r) < per(b)) {
                best = Some(r);
            }
        }
        let r = best.expect("at least one repeat");
        let mut params = model_parameters(spec);
        params.push(("N".into(), spec.sites.to_string()));
        params.push(("dim".into(), spec.dim().to_string()));
        params.push(("T".into(), format_float(args.temperature)));
        params.push(("gap".into(), format_float(*gap)));
        params.push(("mode".into(), match args.mode { TimingMode::FullX => "full-x", TimingMode::TtoRoot => "tto-root" }.into()));
        params.push(("seconds_per_evaluation".into(), format_float(r.wall_time / r.evaluations.max(1) as f64)));
        params.extend(args.common.base_parameters());
        Ok(ResultRecord::from_result("timing", params, &r, None, args.common.seed))
    })?;
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| {
            let x = match args.mode {
                TimingMode::FullX => r.parameter("dim").and_then(|v| v.parse().ok()).unwrap_or(1.0),
                TimingMode::TtoRoot => r.m.unwrap_or(1) as f64,
            };
            (x, r.wall_time_seconds.unwrap_or(0.0) / r.evaluations.max(1) as f64)
        })
        .collect();
    let variable = match args.mode {
        TimingMode::FullX => "dim",
        TimingMode::TtoRoot => "M",
    };
    let summary = vec![format!(
        "summary mode={} exponent_in_{variable}={}",
        match args.mode { TimingMode::FullX => "full-x", TimingMode::TtoRoot => "tto-root" },
        fit_log_slope(&points).map(format_float).unwrap_or_else(|| "n/a".into())
    )];
    Ok(Report { records, summary })
}

fn emit_records(records: &[ResultRecord], format: Format, output: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(records, &mut buf)?,
        Format::Json => {
            let v: Vec<serde_json::Value> = records.iter().map(ResultRecord::to_json).collect();
            serde_json::to_writer_pretty(&mut buf, &v).map_err(|e| Error::Data(e.to_string()))?;
            buf.push(b'\n');
        }
    }
    write_out(&buf, output)
}

fn emit_pairs(pairs: &[(String, String)], format: Format, output: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["key", "value"]).map_err(csv_err)?;
            for (k, v) in pairs {
                w.write_record([k, v]).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let m: serde_json::Map<String, serde_json::Value> = pairs.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
            serde_json::to_writer_pretty(&mut buf, &m).map_err(|e| Error::Data(e.to_string()))?;
            buf.push(b'\n');
        }
    }
    write_out(&buf, output)
}

fn write_out(buf: &[u8], output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, buf)?,
        None => std::io::stdout().lock().write_all(buf)?,
    }
    Ok(())
}

fn finish(mut report: Report, common: &Common) -> Result<()> {
    if !common.timing {
        report.records.iter_mut().for_each(|r| r.wall_time_seconds = None);
    }
    emit_records(&report.records, common.format, common.output.as_deref())?;
    for line in &report.summary {
        eprintln!("{line}");
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ThermalEof(a) => finish(thermal_eof(&a)?, &a.common),
        Command::Bench(a) => finish(bench(&a)?, &a.common),
        Command::ScanK0(a) => finish(scan_k0(&a)?, &a.common),
        Command::ScanM(a) => finish(scan_m(&a)?, &a.common),
        Command::Scaling(a) => emit_pairs(&scaling(&a)?, a.format, a.output.as_deref()),
        Command::Timing(a) => {
            // timing output always carries wall times
            let common = Common { timing: true, ..a.common.clone() };
            finish(timing(&a)?, &common)
        }
    }
}

/// Parses `args` (program name first), runs the command, returns the exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_real_list("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_real_list("0.0:1.0:0.1").unwrap().len(), 11);
        assert_eq!(parse_real_list("0:1:0.1").unwrap()[3], 0.3);
        assert_eq!(parse_real_list("-1, 0.5").unwrap(), vec![-1.0, 0.5]);
        assert_eq!(parse_count_list("6:12:2").unwrap(), vec![6, 8, 10, 12]);
        assert_eq!(parse_count_list("8").unwrap(), vec![8]);
        for bad in ["", "1:2", "1:0:1", "a,b", "0:1:0", "1:2:3:4"] {
            assert!(matches!(parse_real_list(bad), Err(Error::Usage(_))), "{bad}");
        }
        assert!(matches!(parse_count_list("3:1:1"), Err(Error::Usage(_))));
    }

    #[test]
    fn csv_round_trip() {
        let rec = ResultRecord {
            command: "bench".into(),
            parameters: vec![("family".into(), "bell".into()), ("lambda".into(), "0.1".into())],
            eof: 0.1 + 0.2,
            exact_eof: Some(1.0 / 3.0),
            abs_error: Some(1e-17),
            k0: 2,
            k: 3,
            m: None,
            evaluations: 41,
            wall_time_seconds: None,
            converged: true,
            seed: u64::MAX,
            artifact_version: ARTIFACT_VERSION.into(),
        };
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&rec), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&RECORD_FIELDS.join(",")));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        fs::write(&p, &text).unwrap();
        assert_eq!(read_csv(&p).unwrap(), vec![rec]);
    }

    #[test]
    fn config_lines_precede_flags() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        fs::write(&p, "# comment\nseed = 5\ntiming=true\nrestarts=false\n").unwrap();
        let args: Vec<OsString> = ["tto-eof", "bench", "--config", p.to_str().unwrap(), "--family", "bell", "--seed", "9"].iter().map(OsString::from).collect();
        let out: Vec<String> = expand_config(args).unwrap().iter().map(|s| s.to_string_lossy().to_string()).collect();
        assert_eq!(out, ["tto-eof", "bench", "--seed=5", "--timing", "--family", "bell", "--seed", "9"]);
        let cli = Cli::try_parse_from(&out).unwrap();
        let Command::Bench(b) = cli.command else { panic!() };
        assert_eq!(b.common.seed, 9);
        assert!(b.common.timing);
    }

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = [8.0, 16.0, 32.0].iter().map(|&m: &f64| (m, 3.0 * m.powf(2.5))).collect();
        assert!((fit_log_slope(&pts).unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(fit_log_slope(&pts[..1]), None);
    }

    #[test]
    fn bond_list_ends_exact() {
        assert_eq!(default_bond_list(4), vec![1, 2, 3, 4]);
        let l = default_bond_list(64);
        assert_eq!(*l.last().unwrap(), 64);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Capacity(String::new())), 2);
        assert_eq!(exit_code(&Error::Usage(String::new())), 64);
        assert_eq!(exit_code(&Error::DegenerateFit(String::new())), 65);
    }
}
