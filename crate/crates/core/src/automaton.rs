//! Brickwork stochastic automata defined by normalized single-line tensors.
//!
//! A trajectory starts from a product distribution on `width` sites and applies
//! gate layers alternating between the pairs (0,1),(2,3),… and (1,2),(3,4),…; an
//! end site without a partner passes through. One time step is a double layer.
//!
//! Trajectory `i` of a run with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `i`, and ensembles are reduced block by block in trajectory order, so
//! estimates do not depend on the number of worker threads.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, PatchKind, ProductBoundary};
use crate::opcompile::CompiledDiagonal;
use crate::tensors::WSingleLine;
use crate::zn::phase;

/// Row-normalization tolerance for rules.
pub const RULE_TOL: f64 = 1e-12;
/// Trajectories per reduction block.
pub const BLOCK: usize = 256;
/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "STRINGNET_WORKERS";

/// p(cd|ab) = |W_{(ab)(cd)}|² with the entry phases kept alongside.
#[derive(Clone, Debug)]
pub struct StochasticRule {
    modulus: usize,
    arity: usize,
    probs: Vec<f64>,
    phases: Vec<Complex64>,
    /// Per input row: (cumulative threshold on u64, output) over nonzero outputs.
    sampler: Vec<Vec<(u64, u32)>>,
}

impl StochasticRule {
    /// Builds a rule from row-stochastic probabilities of size N²×N².
    pub fn from_probabilities(n: usize, probs: Vec<f64>) -> Result<Self> {
        let phases = vec![Complex64::new(1.0, 0.0); probs.len()];
        Self::build(n, probs, phases)
    }

    fn build(n: usize, probs: Vec<f64>, phases: Vec<Complex64>) -> Result<Self> {
        let nn = n * n;
        if probs.len() != nn * nn {
            return Err(Error::Dimension(format!("rule table must have {} entries", nn * nn)));
        }
        let mut sampler = Vec::with_capacity(nn);
        for row in probs.chunks(nn) {
            if row.iter().any(|&p| !(p >= 0.0)) {
                return Err(Error::InvalidArgument("negative transition probability".into()));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > RULE_TOL {
                return Err(Error::NotNormalized((total - 1.0).abs()));
            }
            let mut acc = 0.0;
            let mut entries = Vec::new();
            for (col, &p) in row.iter().enumerate() {
                if p > 0.0 {
                    acc += p / total;
                    entries.push(((acc * u64::MAX as f64) as u64, col as u32));
                }
            }
            if let Some(last) = entries.last_mut() {
                last.0 = u64::MAX;
            }
            sampler.push(entries);
        }
        Ok(Self { modulus: n, arity: 2, probs, phases, sampler })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Sites per gate.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn prob(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.modulus;
        self.probs[(a * n + b) * n * n + c * n + d]
    }

    pub fn phase(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        let n = self.modulus;
        self.phases[(a * n + b) * n * n + c * n + d]
    }

    /// Row-major N²×N² table p[(ab)][(cd)].
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest deviation of a row sum from 1.
    pub fn row_residual(&self) -> f64 {
        let nn = self.modulus * self.modulus;
        self.probs.chunks(nn).map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Draws (c, d) given (a, b).
    #[inline]
    pub fn sample<R: RngCore>(&self, a: usize, b: usize, rng: &mut R) -> (usize, usize) {
        let n = self.modulus;
        let row = &self.sampler[a * n + b];
        let out = if row.len() == 1 {
            row[0].1
        } else {
            let u = rng.next_u64();
            row.iter().find(|&&(t, _)| u <= t).map_or(row[row.len() - 1].1, |&(_, o)| o)
        } as usize;
        (out / n, out % n)
    }
}

/// Reads the rule off a normalized single-line tensor.
pub fn rule_from_single_line(w: &WSingleLine) -> Result<StochasticRule> {
    let res = w.normalization_residual();
    if res > RULE_TOL {
        return Err(Error::NotNormalized(res));
    }
    let probs = w.entries().iter().map(|z| z.norm_sqr()).collect();
    let phases = w
        .entries()
        .iter()
        .map(|z| if z.norm_sqr() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) })
        .collect();
    StochasticRule::build(w.modulus(), probs, phases)
}

pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws every site independently from its distribution.
pub fn sample_row<R: Rng>(boundary: &[Vec<f64>], rng: &mut R) -> Vec<usize> {
    boundary
        .iter()
        .map(|p| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (j, &q) in p.iter().enumerate() {
                acc += q;
                if u < acc {
                    return j;
                }
            }
            p.iter().rposition(|&q| q > 0.0).unwrap_or(0)
        })
        .collect()
}

/// Applies one gate layer with parity `parity` in place.
#[inline]
pub fn apply_layer<R: RngCore>(rule: &StochasticRule, row: &mut [usize], parity: usize, rng: &mut R) {
    let mut s = parity;
    while s + 1 < row.len() {
        let (c, d) = rule.sample(row[s], row[s + 1], rng);
        row[s] = c;
        row[s + 1] = d;
        s += 2;
    }
}

/// One trajectory: the initial row followed by the row after each double layer.
pub struct Trajectory<'a> {
    rule: &'a StochasticRule,
    row: Vec<usize>,
    remaining: usize,
    started: bool,
    rng: ChaCha8Rng,
}

impl Iterator for Trajectory<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(self.row.clone());
        }
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        apply_layer(self.rule, &mut self.row, 0, &mut self.rng);
        apply_layer(self.rule, &mut self.row, 1, &mut self.rng);
        Some(self.row.clone())
    }
}

fn check_boundary(boundary: &[Vec<f64>], n: usize, width: usize) -> Result<()> {
    if boundary.len() != width || boundary.iter().any(|p| p.len() != n) {
        return Err(Error::Dimension(format!("boundary must have {width} sites of dimension {n}")));
    }
    for p in boundary {
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 || p.iter().any(|&q| q < 0.0) {
            return Err(Error::NotNormalized((s - 1.0).abs()));
        }
    }
    Ok(())
}

/// Trajectory `index` of the run with `seed`, `depth` double layers long.
pub fn simulate<'a>(rule: &'a StochasticRule, boundary: &[Vec<f64>], depth: usize, seed: u64, index: u64) -> Result<Trajectory<'a>> {
    let width = boundary.len();
    if width % 2 != 0 || width == 0 {
        return Err(Error::InvalidArgument(format!("width {width} must be even and positive")));
    }
    check_boundary(boundary, rule.modulus(), width)?;
    let mut rng = trajectory_rng(seed, index);
    let row = sample_row(boundary, &mut rng);
    Ok(Trajectory { rule, row, remaining: depth, started: false, rng })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsembleStats {
    pub estimate: Complex64,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Running sums of a complex sample.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    sum: Complex64,
    sum_re2: f64,
    sum_im2: f64,
}

impl Moments {
    fn push(&mut self, x: Complex64) {
        self.n += 1;
        self.sum += x;
        self.sum_re2 += x.re * x.re;
        self.sum_im2 += x.im * x.im;
    }

    fn merge(&mut self, o: &Moments) {
        self.n += o.n;
        self.sum += o.sum;
        self.sum_re2 += o.sum_re2;
        self.sum_im2 += o.sum_im2;
    }

    fn stats(&self, seed: u64) -> TrajectoryEnsembleStats {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = |s2: f64, m: f64| if self.n > 1 { ((s2 - n * m * m) / (n - 1.0)).max(0.0) } else { 0.0 };
        let se = ((var(self.sum_re2, mean.re) + var(self.sum_im2, mean.im)) / n).sqrt();
        TrajectoryEnsembleStats { estimate: mean, standard_error: se, samples: self.n, seed }
    }
}

/// Worker count from the environment, if set.
pub fn configured_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok().and_then(|s| s.trim().parse().ok()).filter(|&w| w > 0)
}

/// Runs `f` on blocks of trajectory indices in parallel and returns the block
/// results in index order.
fn run_blocks<T: Send>(samples: u64, f: impl Fn(u64, u64) -> T + Sync + Send) -> T
where
    T: Default + Mergeable,
{
    let blocks: Vec<(u64, u64)> = (0..samples.div_ceil(BLOCK as u64)).map(|b| (b * BLOCK as u64, ((b + 1) * BLOCK as u64).min(samples))).collect();
    let run = || blocks.par_iter().map(|&(lo, hi)| f(lo, hi)).collect::<Vec<T>>();
    let results = match configured_workers() {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    let mut acc = T::default();
    for r in &results {
        acc.merge_from(r);
    }
    acc
}

trait Mergeable {
    fn merge_from(&mut self, other: &Self);
}

impl Mergeable for Moments {
    fn merge_from(&mut self, other: &Self) {
        self.merge(other);
    }
}

impl Mergeable for Vec<Moments> {
    fn merge_from(&mut self, other: &Self) {
        if self.is_empty() {
            self.resize(other.len(), Moments::default());
        }
        for (a, b) in self.iter_mut().zip(other) {
            a.merge(b);
        }
    }
}

/// Samples edge labels of an open patch: initial edges from the boundary, then
/// each vertex in order draws its outputs.
pub fn sample_patch<R: RngCore + Rng>(rule: &StochasticRule, geo: &PatchGeometry, boundary: &[Vec<f64>], rng: &mut R, labels: &mut [usize]) {
    let row = sample_row(boundary, rng);
    for (s, &e) in geo.initial_edges.iter().enumerate() {
        labels[e] = row[s];
    }
    for v in &geo.vertices {
        let [a, b, c, d] = v.edges;
        let (x, y) = rule.sample(labels[a], labels[b], rng);
        labels[c] = x;
        labels[d] = y;
    }
}

/// Monte Carlo estimate of a compiled diagonal on an open patch.
pub fn estimate_diagonal(
    rule: &StochasticRule,
    compiled: &CompiledDiagonal,
    geo: &PatchGeometry,
    boundary: &ProductBoundary,
    samples: u64,
    seed: u64,
) -> Result<TrajectoryEnsembleStats> {
    if geo.kind == PatchKind::Torus {
        return Err(Error::Unsupported("sampling needs an input boundary".into()));
    }
    if compiled.modulus != rule.modulus() {
        return Err(Error::Dimension("observable and rule moduli differ".into()));
    }
    if let Some(e) = compiled.max_edge().filter(|&e| e >= geo.num_edges()) {
        return Err(Error::EdgeOutsidePatch(e));
    }
    if samples == 0 {
        return Err(Error::InsufficientData("no samples requested".into()));
    }
    boundary.check(rule.modulus(), geo.width)?;
    let probs = boundary.probabilities();
    let m = run_blocks(samples, |lo, hi| {
        let mut labels = vec![0usize; geo.num_edges()];
        let mut m = Moments::default();
        for i in lo..hi {
            let mut rng = trajectory_rng(seed, i);
            sample_patch(rule, geo, &probs, &mut rng, &mut labels);
            m.push(compiled.evaluate(&labels));
        }
        m
    });
    Ok(m.stats(seed))
}

/// Shape of the t = 0 boundary of a correlator run.
///
/// `Row` starts every site of the chain at t = 0. `Corner` starts from a single gate
/// at the chain centre: layer ℓ only fires gates inside [c − ℓ, c + 2 + ℓ), so one
/// fresh boundary site joins at each end per layer, as for an open quadrant whose
/// two boundary edges meet at the corner. Sites outside the window keep their
/// boundary draw until they join. Whenever the boundary distribution is stationary
/// under the rule (uniform boundary, doubly stochastic rule) the two shapes give the
/// same statistics inside the light cone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryShape {
    #[default]
    Row,
    Corner,
}

/// Parameters of an equal-site two-time correlator run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSpec {
    pub k: i64,
    pub width: usize,
    pub r_max: usize,
    /// Double layers simulated before the first measurement.
    pub t0: usize,
    pub samples: u64,
    pub seed: u64,
    /// Measured sites; defaults to the sites at least 2·r_max from both ends for a
    /// row and to the two corner sites for a corner.
    pub sites: Option<(usize, usize)>,
    #[serde(default)]
    pub shape: BoundaryShape,
}

impl CorrelatorSpec {
    pub fn new(k: i64, width: usize, r_max: usize, samples: u64, seed: u64) -> Self {
        Self { k, width, r_max, t0: width / 2, samples, seed, sites: None, shape: BoundaryShape::Row }
    }

    /// Left site of the corner gate.
    pub fn corner_site(&self) -> usize {
        (self.width / 2) & !1
    }

    pub fn site_window(&self) -> (usize, usize) {
        self.sites.unwrap_or_else(|| match self.shape {
            BoundaryShape::Row => {
                let m = 2 * self.r_max;
                (m, (self.width.saturating_sub(m)).max(m + 1))
            }
            BoundaryShape::Corner => (self.corner_site(), self.corner_site() + 2),
        })
    }
}

/// Applies the gates of one layer whose two sites lie in `lo..hi`.
fn apply_layer_within<R: RngCore>(rule: &StochasticRule, row: &mut [usize], parity: usize, lo: usize, hi: usize, rng: &mut R) {
    let mut s = lo + (lo + parity) % 2;
    while s + 1 < hi {
        let (c, d) = rule.sample(row[s], row[s + 1], rng);
        row[s] = c;
        row[s + 1] = d;
        s += 2;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorPoint {
    pub r: usize,
    pub estimate: Complex64,
    pub standard_error: f64,
}

/// C(r) = ⟨ω^{k(n_x(t0) − n_x(t0+r))}⟩ for r = 1..=r_max, averaged over the site
/// window within each trajectory; the error bars come from the spread between
/// trajectories. For a corner boundary t0 counts double layers from the corner and
/// the chain must hold the whole light cone, width ≥ 4·(t0 + r_max) + 2.
pub fn time_correlator(rule: &StochasticRule, boundary: &[Vec<f64>], spec: &CorrelatorSpec) -> Result<Vec<CorrelatorPoint>> {
    if spec.r_max == 0 {
        return Err(Error::InvalidArgument("r_max must be positive".into()));
    }
    if spec.width < 4 * spec.r_max {
        return Err(Error::InvalidArgument(format!("width {} is below 4·r_max = {}", spec.width, 4 * spec.r_max)));
    }
    let (lo, hi) = spec.site_window();
    if lo >= hi || hi > spec.width {
        return Err(Error::InvalidArgument(format!("site window {lo}..{hi} is empty or outside the chain")));
    }
    if spec.samples < 2 {
        return Err(Error::InsufficientData("need at least two trajectories".into()));
    }
    let corner = spec.shape == BoundaryShape::Corner;
    let reach = 2 * (spec.t0 + spec.r_max);
    if corner && (spec.corner_site() < reach || spec.corner_site() + 2 + reach > spec.width) {
        return Err(Error::InvalidArgument(format!(
            "width {} cannot hold the corner light cone of t0 + r_max = {} double layers",
            spec.width,
            spec.t0 + spec.r_max
        )));
    }
    check_boundary(boundary, rule.modulus(), spec.width)?;
    let n = rule.modulus();
    let c = spec.corner_site();
    let double_layer = |row: &mut [usize], t: usize, rng: &mut ChaCha8Rng| {
        if corner {
            for (parity, l) in [(0, 2 * t), (1, 2 * t + 1)] {
                apply_layer_within(rule, row, parity, c - l, c + 2 + l, rng);
            }
        } else {
            apply_layer(rule, row, 0, rng);
            apply_layer(rule, row, 1, rng);
        }
    };
    let table: Vec<Complex64> = (0..n as i64).map(|d| phase(spec.k * d, n)).collect();
    let inv = 1.0 / (hi - lo) as f64;
    let moments = run_blocks(spec.samples, |blo, bhi| {
        let mut acc = vec![Moments::default(); spec.r_max];
        let mut row;
        let mut start = vec![0usize; hi - lo];
        for i in blo..bhi {
            let mut rng = trajectory_rng(spec.seed, i);
            row = sample_row(boundary, &mut rng);
            for t in 0..spec.t0 {
                double_layer(&mut row, t, &mut rng);
            }
            start.copy_from_slice(&row[lo..hi]);
            for (r, slot) in acc.iter_mut().enumerate() {
                double_layer(&mut row, spec.t0 + r, &mut rng);
                let s: Complex64 = start.iter().zip(&row[lo..hi]).map(|(&a, &b)| table[(a + n - b) % n]).sum();
                slot.push(s * inv);
            }
        }
        acc
    });
    Ok(moments
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let st = m.stats(spec.seed);
            CorrelatorPoint { r: i + 1, estimate: st.estimate, standard_error: st.standard_error }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_error: f64,
    pub prefactor: f64,
    pub r_min: usize,
    pub r_max: usize,
    pub points: usize,
    pub weighted: bool,
}

/// Minimum number of significant points a fit needs.
pub const MIN_FIT_POINTS: usize = 6;

/// Least squares of log|C| against log r (or r when `exponential`), weighted by the
/// propagated error bars unless some point has none.
fn log_fit(points: &[CorrelatorPoint], window: (usize, usize), exponential: bool) -> Result<PowerLawFit> {
    let used: Vec<&CorrelatorPoint> = points
        .iter()
        .filter(|p| p.r >= window.0 && p.r <= window.1 && p.r > 0)
        .filter(|p| p.estimate.norm() > 3.0 * p.standard_error && p.estimate.norm() > 0.0)
        .collect();
    if used.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} significant points in r ∈ [{}, {}], need {MIN_FIT_POINTS}",
            used.len(),
            window.0,
            window.1
        )));
    }
    let weighted = used.iter().all(|p| p.standard_error > 0.0);
    let xs: Vec<f64> = used.iter().map(|p| if exponential { p.r as f64 } else { (p.r as f64).ln() }).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.estimate.norm().ln()).collect();
    let ws: Vec<f64> = used
        .iter()
        .map(|p| if weighted { (p.estimate.norm() / p.standard_error).powi(2) } else { 1.0 })
        .collect();
    let s: f64 = ws.iter().sum();
    let sx: f64 = ws.iter().zip(&xs).map(|(w, x)| w * x).sum();
    let sy: f64 = ws.iter().zip(&ys).map(|(w, y)| w * y).sum();
    let sxx: f64 = ws.iter().zip(&xs).map(|(w, x)| w * x * x).sum();
    let sxy: f64 = ws.iter().zip(xs.iter().zip(&ys)).map(|(w, (x, y))| w * x * y).sum();
    let det = s * sxx - sx * sx;
    if det <= 0.0 {
        return Err(Error::InsufficientData("fit abscissae are degenerate".into()));
    }
    let slope = (s * sxy - sx * sy) / det;
    let icept = (sxx * sy - sx * sxy) / det;
    let err = if weighted {
        (s / det).sqrt()
    } else {
        let m = xs.len() as f64;
        let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icept - slope * x).powi(2)).sum();
        (rss / (m - 2.0) * s / det).sqrt()
    };
    Ok(PowerLawFit {
        exponent: slope,
        exponent_error: err,
        prefactor: icept.exp(),
        r_min: window.0,
        r_max: window.1,
        points: used.len(),
        weighted,
    })
}

/// Fits |C(r)| ≈ A·r^α over `window` (default r ∈ [4, r_max/2]).
pub fn fit_power_law(points: &[CorrelatorPoint], window: Option<(usize, usize)>) -> Result<PowerLawFit> {
    let r_top = points.iter().map(|p| p.r).max().unwrap_or(0);
    log_fit(points, window.unwrap_or((4, r_top / 2)), false)
}

/// Fits |C(r)| ≈ A·e^{λr}; `exponent` holds λ (negative for decay).
pub fn fit_exponential(points: &[CorrelatorPoint], window: (usize, usize)) -> Result<PowerLawFit> {
    log_fit(points, window, true)
}
