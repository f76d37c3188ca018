//! Run driver behind the `stringnet` binary: a flat run configuration shared by
//! the command-line flags and JSON config files, experiment dispatch, CSV outputs
//! and a manifest next to every output file.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::automaton::{estimate_diagonal, fit_exponential, fit_power_law, rule_from_single_line, time_correlator, BoundaryShape, CorrelatorPoint, CorrelatorSpec, StochasticRule};
use crate::checks::{all_pass, oracle_suite, validation_suite, CheckRow};
use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, ProductBoundary};
use crate::network::{DoubleLineNet, SingleLineNet};
use crate::opcompile::{compile_double_line, compile_single_line, Compiled};
use crate::oracle::{contract_single_line, ORACLE_CAP};
use crate::paths::{named_rule, PathSpec};
use crate::spectral::{path_scan, write_scan_csv, SolveMode};
use crate::tensors::Tensor;
use crate::zn::PauliString;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Exit status when a run completes but one of its checks fails.
pub const VALIDATION_FAILURE: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    PathScan,
    Sample,
    Correlator,
    Fit,
    Validate,
    OracleCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    PowerLaw,
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Auto,
    Dense,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    Row,
    Corner,
}

impl From<ShapeArg> for BoundaryShape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Row => BoundaryShape::Row,
            ShapeArg::Corner => BoundaryShape::Corner,
        }
    }
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => SolveMode::Auto,
            ModeArg::Dense => SolveMode::Dense,
            ModeArg::Iterative => SolveMode::Iterative,
        }
    }
}

/// One run. Unused fields stay empty; `resolve` fills in defaults so the manifest
/// records every value the run used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip = Experiment::Validate)]
    pub experiment: Experiment,
    /// Path family (tc-ds, z22-z4-seg1, z22-z4-seg2, set-frac, dipole-seg1..3).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Named rule (WQ, WP, DS, TC<N>, Z<N>, Z<N>F) instead of a path.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[arg(long = "N")]
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub modulus: Option<usize>,
    /// Ring width for transfer spectra.
    #[arg(long = "L")]
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    /// Brickwork layers of a sampled patch.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Pauli string as `edge:z:x` factors separated by spaces or commas.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[arg(long = "rmax")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<usize>,
    /// Double layers before the first correlator measurement.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<usize>,
    /// Correlator t = 0 boundary: a full row or a corner.
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<ShapeArg>,
    /// Correlator CSV read by `fit`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<FitModel>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_min: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_max: Option<usize>,
    /// Random compiler-oracle cases for `oracle-check`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    /// Monte Carlo cases for `oracle-check`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_cases: Option<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub all_paths: bool,
    /// Output CSV; standard output when omitted (no manifest is written then).
    #[arg(long, short)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            path: None,
            rule: None,
            g: None,
            g_grid: None,
            grid_points: None,
            modulus: None,
            l: None,
            mode: None,
            width: None,
            depth: None,
            samples: None,
            seed: None,
            observable: None,
            k: None,
            r_max: None,
            t0: None,
            boundary: None,
            input: None,
            model: None,
            fit_min: None,
            fit_max: None,
            cases: None,
            mc_cases: None,
            all_paths: false,
            output: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn require<T: Clone>(v: &Option<T>, what: &str, exp: Experiment) -> Result<T> {
        v.clone().ok_or_else(|| Error::Schema(format!("{} requires `{what}`", exp_name(exp))))
    }

    fn path_spec(&self) -> Result<Option<PathSpec>> {
        self.path.as_deref().map(|p| PathSpec::new(p.parse()?, self.modulus)).transpose()
    }

    /// Fills defaults and rejects incomplete or contradictory configurations.
    pub fn resolve(mut self) -> Result<Self> {
        let exp = self.experiment;
        if self.path.is_some() && self.rule.is_some() {
            return Err(Error::Schema("give either `path` or `rule`, not both".into()));
        }
        let spec = self.path_spec()?;
        match exp {
            Experiment::PathScan => {
                let spec = spec.ok_or_else(|| Error::Schema("path-scan requires `path`".into()))?;
                self.modulus = Some(spec.modulus);
                self.l.get_or_insert(6);
                self.mode.get_or_insert(ModeArg::Auto);
                if self.g_grid.is_none() {
                    self.grid_points.get_or_insert(21);
                }
            }
            Experiment::Sample => {
                self.source_label()?;
                Self::require(&self.seed, "seed", exp)?;
                Self::require(&self.observable, "observable", exp)?;
                self.width.get_or_insert(4);
                self.depth.get_or_insert(3);
                self.samples.get_or_insert(100_000);
            }
            Experiment::Correlator => {
                self.source_label()?;
                Self::require(&self.seed, "seed", exp)?;
                self.k.get_or_insert(1);
                self.width.get_or_insert(512);
                let r_max = *self.r_max.get_or_insert(64);
                self.samples.get_or_insert(10_000);
                self.t0.get_or_insert(0);
                self.boundary.get_or_insert(ShapeArg::Row);
                if self.width.unwrap() < 4 * r_max {
                    return Err(Error::Schema(format!("width must be at least 4·rmax = {}", 4 * r_max)));
                }
                let (width, t0) = (self.width.unwrap(), self.t0.unwrap());
                let c = (width / 2) & !1;
                let reach = 2 * (t0 + r_max);
                if self.boundary == Some(ShapeArg::Corner) && (c < reach || c + 2 + reach > width) {
                    return Err(Error::Schema(format!("a corner boundary needs width ≥ {}", 4 * (t0 + r_max) + 4)));
                }
            }
            Experiment::Fit => {
                Self::require(&self.input, "input", exp)?;
                self.model.get_or_insert(FitModel::PowerLaw);
            }
            Experiment::Validate => {
                if !self.all_paths && spec.is_none() {
                    return Err(Error::Schema("validate requires `path` or `all_paths`".into()));
                }
                self.grid_points.get_or_insert(101);
            }
            Experiment::OracleCheck => {
                Self::require(&self.seed, "seed", exp)?;
                self.cases.get_or_insert(200);
                self.mc_cases.get_or_insert(50);
                self.samples.get_or_insert(100_000);
            }
        }
        Ok(self)
    }

    /// Short name of the rule or path point a run uses.
    fn source_label(&self) -> Result<String> {
        match (&self.path, &self.rule) {
            (Some(p), None) => Ok(format!("{p}@{}", Self::require(&self.g, "g", self.experiment)?)),
            (None, Some(r)) => Ok(r.clone()),
            _ => Err(Error::Schema(format!("{} requires `path` (with `g`) or `rule`", exp_name(self.experiment)))),
        }
    }

    fn source_tensor(&self) -> Result<Tensor> {
        match self.path_spec()? {
            Some(spec) => spec.evaluate(self.g.unwrap_or(0.0)),
            None => Ok(Tensor::Single(named_rule(self.rule.as_deref().unwrap_or_default())?)),
        }
    }

    fn source_rule(&self) -> Result<StochasticRule> {
        let w = match self.source_tensor()? {
            Tensor::Single(w) => w,
            Tensor::Double(a) => crate::opcompile::reduce_double_to_single(&a)?,
        };
        rule_from_single_line(&w)
    }
}

fn exp_name(e: Experiment) -> &'static str {
    match e {
        Experiment::PathScan => "path-scan",
        Experiment::Sample => "sample",
        Experiment::Correlator => "correlator",
        Experiment::Fit => "fit",
        Experiment::Validate => "validate",
        Experiment::OracleCheck => "oracle-check",
    }
}

/// Parses `edge:z:x` factors separated by whitespace or commas.
pub fn parse_observable(s: &str, modulus: u32) -> Result<PauliString> {
    let mut factors = Vec::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = tok.split(':').collect();
        let bad = || Error::Schema(format!("observable factor {tok:?} is not edge:z:x"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let e: usize = parts[0].parse().map_err(|_| bad())?;
        let z: i64 = parts[1].parse().map_err(|_| bad())?;
        let x: i64 = parts[2].parse().map_err(|_| bad())?;
        factors.push((e, z, x));
    }
    PauliString::from_factors(modulus, factors)
}

/// What a finished run produced.
#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub rows: usize,
    pub passed: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            VALIDATION_FAILURE
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a RunConfig,
    version: &'static str,
    started_unix: u64,
    wall_clock_seconds: f64,
    rows: usize,
    passed: bool,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Validates `config`, runs it, writes the CSV and (for file outputs) the manifest.
pub fn run_experiment(config: RunConfig) -> Result<RunOutcome> {
    let config = config.resolve()?;
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let outcome = match config.experiment {
        Experiment::PathScan => run_path_scan(&config)?,
        Experiment::Sample => run_sample(&config)?,
        Experiment::Correlator => run_correlator(&config)?,
        Experiment::Fit => run_fit(&config)?,
        Experiment::Validate => {
            let mut rows = validation_suite(config.grid_points.unwrap())?;
            if !config.all_paths {
                let p = config.path.clone().unwrap_or_default();
                rows.retain(|r| r.subject.starts_with(&p));
            }
            write_checks(&config, &rows)?
        }
        Experiment::OracleCheck => {
            let rows = oracle_suite(config.cases.unwrap(), config.mc_cases.unwrap(), config.samples.unwrap(), config.seed.unwrap())?;
            write_checks(&config, &rows)?
        }
    };
    if let Some(out) = &config.output {
        let m = Manifest {
            config: &config,
            version: VERSION,
            started_unix,
            wall_clock_seconds: clock.elapsed().as_secs_f64(),
            rows: outcome.rows,
            passed: outcome.passed,
        };
        std::fs::write(manifest_path(out), serde_json::to_string_pretty(&m)?)?;
    }
    Ok(outcome)
}

fn sink(config: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}

fn write_rows<T: Serialize>(out: Box<dyn Write>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn write_checks(config: &RunConfig, rows: &[CheckRow]) -> Result<RunOutcome> {
    write_rows(sink(config)?, rows)?;
    Ok(RunOutcome { rows: rows.len(), passed: all_pass(rows) })
}

fn run_path_scan(config: &RunConfig) -> Result<RunOutcome> {
    let spec = config.path_spec()?.expect("resolved");
    let grid = match &config.g_grid {
        Some(g) => g.clone(),
        None => spec.grid(config.grid_points.unwrap()),
    };
    let rows = path_scan(&spec, &grid, config.l.unwrap(), config.mode.unwrap().into())?;
    write_scan_csv(&rows, sink(config)?)?;
    Ok(RunOutcome { rows: rows.len(), passed: true })
}

#[derive(Serialize)]
struct SampleRow {
    source: String,
    observable: String,
    width: usize,
    depth: usize,
    samples: u64,
    seed: u64,
    re: f64,
    im: f64,
    standard_error: f64,
    exact_re: Option<f64>,
    exact_im: Option<f64>,
}

fn run_sample(config: &RunConfig) -> Result<RunOutcome> {
    let geo = PatchGeometry::open(config.width.unwrap(), config.depth.unwrap())?;
    let tensor = config.source_tensor()?;
    let n = tensor.modulus();
    let op = parse_observable(config.observable.as_deref().unwrap(), n as u32)?;
    let rule = config.source_rule()?;
    let boundary = ProductBoundary::plus(n, geo.width);
    let (samples, seed) = (config.samples.unwrap(), config.seed.unwrap());
    let (compiled, exact_state) = match &tensor {
        Tensor::Single(w) => {
            let net = SingleLineNet::uniform(geo.clone(), w.clone(), Some(boundary.clone()))?;
            let exact = contract_single_line(&net, ORACLE_CAP).ok();
            (Compiled::Diagonal(compile_single_line(&net, &op)?), exact.map(|s| s.expectation_pauli(&op)).transpose()?)
        }
        Tensor::Double(a) => {
            let net = DoubleLineNet::uniform(geo.clone(), a.clone(), Some(boundary.clone()))?;
            let exact = crate::oracle::contract_double_line(&net, ORACLE_CAP).ok();
            (compile_double_line(&net, &op)?, exact.map(|s| s.expectation_pauli(&op)).transpose()?)
        }
    };
    let (est, err) = match compiled {
        Compiled::Diagonal(d) => {
            let s = estimate_diagonal(&rule, &d, &geo, &boundary, samples, seed)?;
            (s.estimate, s.standard_error)
        }
        Compiled::Annihilates => (Complex64::new(0.0, 0.0), 0.0),
    };
    let row = SampleRow {
        source: config.source_label()?,
        observable: config.observable.clone().unwrap(),
        width: geo.width,
        depth: config.depth.unwrap(),
        samples,
        seed,
        re: est.re,
        im: est.im,
        standard_error: err,
        exact_re: exact_state.map(|z| z.re),
        exact_im: exact_state.map(|z| z.im),
    };
    write_rows(sink(config)?, &[row])?;
    Ok(RunOutcome { rows: 1, passed: true })
}

/// One correlator point together with every parameter that produced it, so rows
/// from several runs can share a file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorRow {
    pub source: String,
    pub k: i64,
    pub width: usize,
    pub r_max: usize,
    pub t0: usize,
    pub boundary: ShapeArg,
    pub samples: u64,
    pub seed: u64,
    pub r: usize,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub standard_error: f64,
}

impl CorrelatorRow {
    fn params(&self) -> (String, i64, usize, usize, usize, ShapeArg, u64, u64) {
        (self.source.clone(), self.k, self.width, self.r_max, self.t0, self.boundary, self.samples, self.seed)
    }
}

fn run_correlator(config: &RunConfig) -> Result<RunOutcome> {
    let rule = config.source_rule()?;
    let mut spec = CorrelatorSpec::new(config.k.unwrap(), config.width.unwrap(), config.r_max.unwrap(), config.samples.unwrap(), config.seed.unwrap());
    spec.t0 = config.t0.unwrap();
    spec.shape = config.boundary.unwrap().into();
    let boundary = ProductBoundary::plus(rule.modulus(), spec.width).probabilities();
    let points = time_correlator(&rule, &boundary, &spec)?;
    let source = config.source_label()?;
    let rows: Vec<CorrelatorRow> = points
        .iter()
        .map(|p| CorrelatorRow {
            source: source.clone(),
            k: spec.k,
            width: spec.width,
            r_max: spec.r_max,
            t0: spec.t0,
            boundary: config.boundary.unwrap(),
            samples: spec.samples,
            seed: spec.seed,
            r: p.r,
            re: p.estimate.re,
            im: p.estimate.im,
            abs: p.estimate.norm(),
            standard_error: p.standard_error,
        })
        .collect();
    match &config.output {
        Some(path) => append_correlator_csv(path, &rows)?,
        None => write_rows(sink(config)?, &rows)?,
    }
    Ok(RunOutcome { rows: rows.len(), passed: true })
}

/// Appends rows, writing the header only when the file is new or empty.
pub fn append_correlator_csv(path: &Path, rows: &[CorrelatorRow]) -> Result<()> {
    let fresh = std::fs::metadata(path).map_or(true, |m| m.len() == 0);
    if !fresh {
        let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
        let expected = csv::StringRecord::from(vec!["source", "k", "width", "r_max", "t0", "boundary", "samples", "seed", "r", "re", "im", "abs", "standard_error"]);
        if r.headers().map_err(csv_err)? != &expected {
            return Err(Error::Schema(format!("{} is not a correlator CSV", path.display())));
        }
    }
    let f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(f);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_correlator_csv(path: &Path) -> Result<Vec<CorrelatorRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FitRow {
    pub source: String,
    pub k: i64,
    pub width: usize,
    pub r_max: usize,
    pub t0: usize,
    pub boundary: ShapeArg,
    pub samples: u64,
    pub seed: u64,
    pub model: FitModel,
    pub exponent: f64,
    pub exponent_error: f64,
    pub prefactor: f64,
    pub fit_min: usize,
    pub fit_max: usize,
    pub points: usize,
}

/// Fits every parameter group of a correlator file, in order of first appearance.
pub fn fit_correlator_rows(rows: &[CorrelatorRow], model: FitModel, window: (Option<usize>, Option<usize>)) -> Result<Vec<FitRow>> {
    let mut groups: Vec<(CorrelatorRow, Vec<CorrelatorPoint>)> = Vec::new();
    for r in rows {
        let p = CorrelatorPoint { r: r.r, estimate: Complex64::new(r.re, r.im), standard_error: r.standard_error };
        match groups.iter_mut().find(|(head, _)| head.params() == r.params()) {
            Some((_, pts)) => pts.push(p),
            None => groups.push((r.clone(), vec![p])),
        }
    }
    if groups.is_empty() {
        return Err(Error::InsufficientData("correlator file has no rows".into()));
    }
    groups
        .into_iter()
        .map(|(head, pts)| {
            let top = pts.iter().map(|p| p.r).max().unwrap_or(0);
            let lo = window.0.unwrap_or(if model == FitModel::PowerLaw { 4 } else { 1 });
            let hi = window.1.unwrap_or(top / 2);
            let fit = match model {
                FitModel::PowerLaw => fit_power_law(&pts, Some((lo, hi)))?,
                FitModel::Exponential => fit_exponential(&pts, (lo, hi))?,
            };
            Ok(FitRow {
                source: head.source,
                k: head.k,
                width: head.width,
                r_max: head.r_max,
                t0: head.t0,
                boundary: head.boundary,
                samples: head.samples,
                seed: head.seed,
                model,
                exponent: fit.exponent,
                exponent_error: fit.exponent_error,
                prefactor: fit.prefactor,
                fit_min: fit.r_min,
                fit_max: fit.r_max,
                points: fit.points,
            })
        })
        .collect()
}

fn run_fit(config: &RunConfig) -> Result<RunOutcome> {
    let rows = read_correlator_csv(config.input.as_deref().unwrap())?;
    let fits = fit_correlator_rows(&rows, config.model.unwrap(), (config.fit_min, config.fit_max))?;
    write_rows(sink(config)?, &fits)?;
    Ok(RunOutcome { rows: fits.len(), passed: true })
}
