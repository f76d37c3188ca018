//! Transfer operators of the automata on rings and the correlation length
//! ξ = −1/ln|η₂|, measured in double layers.
//!
//! The ring of L sites has state index Σ_s n_s N^{L−1−s}. One step applies the
//! gates (0,1),(2,3),… and then (1,2),…,(L−1,0). Conserved quantities split the
//! state space into closed sectors, each contributing a Perron eigenvalue 1;
//! η₂ is the largest remaining eigenvalue.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{rule_from_single_line, StochasticRule};
use crate::error::{Error, Result};
use crate::paths::{PathName, PathSpec};
use crate::zn::{checked_pow, phase};

/// Largest state space handled by dense diagonalization.
pub const DENSE_CAP: usize = 4096;
/// Largest state space handled at all.
pub const ITERATIVE_CAP: usize = 1 << 20;
pub const EIGEN_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 20_000;
/// Number of leading eigenvalues reported.
pub const REPORTED: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    Auto,
    Dense,
    Iterative,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Auto => "auto",
            SolveMode::Dense => "dense",
            SolveMode::Iterative => "iterative",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferSpectrum {
    pub ring_width: usize,
    /// By descending magnitude, Perron eigenvalues of all sectors first.
    pub leading_eigenvalues: Vec<Complex64>,
    pub eta2: Complex64,
    /// In double layers; infinite when |η₂| ≥ 1 − 1e−12.
    pub xi: f64,
    pub sectors: usize,
    pub mode: SolveMode,
    pub residual: f64,
    /// Subspace iterations used (0 in dense mode).
    pub iterations: usize,
}

pub fn xi_from_eta(eta_abs: f64) -> f64 {
    if eta_abs >= 1.0 - 1e-12 {
        f64::INFINITY
    } else if eta_abs == 0.0 {
        0.0
    } else {
        -1.0 / eta_abs.ln()
    }
}

/// Ring geometry and the rule's nonzero transitions.
struct Ring {
    n: usize,
    l: usize,
    dim: usize,
    places: Vec<usize>,
    /// Per input pair: nonzero (output pair, probability).
    moves: Vec<Vec<(usize, f64)>>,
}

impl Ring {
    fn new(rule: &StochasticRule, l: usize, cap: usize) -> Result<Self> {
        if l < 2 || l % 2 != 0 {
            return Err(Error::InvalidArgument(format!("ring width {l} must be even and at least 2")));
        }
        let n = rule.modulus();
        let dim = checked_pow(n, l)?;
        if dim > cap {
            return Err(Error::CapExceeded { what: "transfer operator dimension".into(), needed: dim as u128, cap: cap as u128 });
        }
        let nn = n * n;
        let moves = (0..nn)
            .map(|i| rule.probs()[i * nn..(i + 1) * nn].iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(o, &p)| (o, p)).collect())
            .collect();
        let places = (0..l).map(|s| n.pow((l - 1 - s) as u32)).collect();
        Ok(Self { n, l, dim, places, moves })
    }

    fn gates(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.l).step_by(2).chain((1..self.l).step_by(2)).map(move |s| (s, (s + 1) % self.l))
    }

    fn apply_gate(&self, (s1, s2): (usize, usize), v: &[f64], out: &mut [f64]) {
        let (p1, p2) = (self.places[s1], self.places[s2]);
        out.iter_mut().for_each(|x| *x = 0.0);
        for (idx, &x) in v.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let (a, b) = ((idx / p1) % self.n, (idx / p2) % self.n);
            let base = idx - a * p1 - b * p2;
            for &(o, p) in &self.moves[a * self.n + b] {
                out[base + (o / self.n) * p1 + (o % self.n) * p2] += p * x;
            }
        }
    }

    /// v ← T v
    fn apply(&self, v: &mut Vec<f64>, scratch: &mut Vec<f64>) {
        for g in self.gates().collect::<Vec<_>>() {
            self.apply_gate(g, v, scratch);
            std::mem::swap(v, scratch);
        }
    }

    fn dense(&self) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(self.dim, self.dim);
        let mut v = vec![0.0; self.dim];
        let mut scratch = vec![0.0; self.dim];
        for col in 0..self.dim {
            v.iter_mut().for_each(|x| *x = 0.0);
            v[col] = 1.0;
            self.apply(&mut v, &mut scratch);
            for (row, &x) in v.iter().enumerate() {
                t[(row, col)] = x;
            }
        }
        t
    }

    /// Whether single-gate moves are reversible and include staying put.
    fn moves_symmetric(&self) -> bool {
        let nn = self.n * self.n;
        (0..nn).all(|i| {
            self.moves[i].iter().any(|&(o, _)| o == i) && self.moves[i].iter().all(|&(o, _)| self.moves[o].iter().any(|&(back, _)| back == i))
        })
    }

    /// Connected components under single-gate moves.
    fn move_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (s1, s2) in self.gates() {
            let (p1, p2) = (self.places[s1], self.places[s2]);
            for idx in 0..self.dim {
                let (a, b) = ((idx / p1) % self.n, (idx / p2) % self.n);
                let base = idx - a * p1 - b * p2;
                for &(o, _) in &self.moves[a * self.n + b] {
                    let j = base + (o / self.n) * p1 + (o % self.n) * p2;
                    let (ra, rb) = (find(&mut parent, idx), find(&mut parent, j));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        relabel((0..self.dim).map(|i| find(&mut parent, i)).collect())
    }
}

fn relabel(roots: Vec<usize>) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    roots.iter().map(|r| { let k = map.len(); *map.entry(*r).or_insert(k) }).collect()
}

/// Dense one-step Markov operator, column-stochastic.
pub fn build_transfer_operator(rule: &StochasticRule, l: usize) -> Result<DMatrix<f64>> {
    Ok(Ring::new(rule, l, DENSE_CAP)?.dense())
}

/// Sector of every state and whether the sector is closed.
fn dense_sectors(t: &DMatrix<f64>) -> (Vec<usize>, Vec<bool>) {
    let dim = t.nrows();
    let mut g = DiGraph::<(), ()>::with_capacity(dim, 0);
    let nodes: Vec<_> = (0..dim).map(|_| g.add_node(())).collect();
    for col in 0..dim {
        for row in 0..dim {
            if t[(row, col)] != 0.0 && row != col {
                g.add_edge(nodes[col], nodes[row], ());
            }
        }
    }
    let sccs = tarjan_scc(&g);
    let mut id = vec![0; dim];
    for (k, comp) in sccs.iter().enumerate() {
        for n in comp {
            id[n.index()] = k;
        }
    }
    let mut closed = vec![true; sccs.len()];
    for col in 0..dim {
        for row in 0..dim {
            if t[(row, col)] != 0.0 && id[row] != id[col] {
                closed[id[col]] = false;
            }
        }
    }
    (id, closed)
}

fn sort_desc(v: &mut [Complex64]) {
    v.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap_or(std::cmp::Ordering::Equal).then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal)));
}

/// Dense spectrum per sector with one Perron eigenvalue removed from each closed one.
fn dense_spectrum(ring: &Ring) -> Result<TransferSpectrum> {
    if ring.moves_symmetric() {
        let id = ring.move_components();
        if let Some(k) = vanishing_check(ring, &id) {
            return finish(ring.l, k, vec![], SolveMode::Dense, 0.0, 0);
        }
    }
    let t = ring.dense();
    let (id, closed) = if ring.moves_symmetric() {
        let id = ring.move_components();
        let k = id.iter().max().map_or(0, |m| m + 1);
        (id, vec![true; k])
    } else {
        dense_sectors(&t)
    };
    let mut members = vec![Vec::new(); closed.len()];
    for (s, &k) in id.iter().enumerate() {
        members[k].push(s);
    }
    let per_sector: Vec<Result<Vec<Complex64>>> = members
        .par_iter()
        .zip(closed.par_iter())
        .map(|(m, &is_closed)| {
            let block = DMatrix::from_fn(m.len(), m.len(), |i, j| t[(m[i], m[j])]);
            let mut ev = dense_eigenvalues(&block)?;
            if is_closed {
                let (k, dist) = ev.iter().enumerate().map(|(k, z)| (k, (z - 1.0).norm())).fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
                if dist > 1e-8 {
                    return Err(Error::NotConverged { iterations: 0, residual: dist });
                }
                ev.remove(k);
            }
            Ok(ev)
        })
        .collect();
    let mut rest = Vec::new();
    for r in per_sector {
        rest.extend(r?);
    }
    sort_desc(&mut rest);
    let sectors = closed.iter().filter(|&&c| c).count();
    finish(ring.l, sectors, rest, SolveMode::Dense, 0.0, 0)
}

fn finish(l: usize, sectors: usize, rest: Vec<Complex64>, mode: SolveMode, residual: f64, iterations: usize) -> Result<TransferSpectrum> {
    let eta2 = rest.first().copied().unwrap_or(Complex64::new(0.0, 0.0));
    let eta2 = if eta2.norm() < 1e-14 { Complex64::new(0.0, 0.0) } else { eta2 };
    let mut leading = vec![Complex64::new(1.0, 0.0); sectors];
    leading.extend(rest);
    leading.truncate(REPORTED.max(sectors + 1));
    Ok(TransferSpectrum { ring_width: l, leading_eigenvalues: leading, eta2, xi: xi_from_eta(eta2.norm()), sectors, mode, residual, iterations })
}

/// Eigenvalues of a dense real matrix.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    use faer::complex_native::c64;
    let n = m.nrows();
    if n <= 2 {
        return Ok(m.complex_eigenvalues().iter().copied().collect());
    }
    let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
    let scale = a.norm_l2().max(1.0);
    // Transfer blocks are sparse with large exactly-zero spectra, which trips the QR sweep; a random
    // orthogonal similarity removes that structure without changing the eigenvalues.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e16);
    let mut worst = f64::INFINITY;
    for _ in 0..4 {
        let g = faer::Mat::<f64>::from_fn(n, n, |_, _| rng.gen::<f64>() - 0.5);
        let q = g.qr().compute_q();
        let b = q.transpose() * &a * &q;
        let ev = std::panic::catch_unwind(|| b.eigenvalues::<c64>());
        let Ok(ev) = ev else { continue };
        let ev: Vec<Complex64> = ev.into_iter().map(|z| Complex64::new(z.re, z.im)).collect();
        let sum: Complex64 = ev.iter().sum();
        let err = (sum - trace).norm() / scale;
        if ev.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && err < 1e-8 {
            return Ok(ev);
        }
        worst = worst.min(err);
    }
    Err(Error::NotConverged { iterations: 0, residual: worst })
}

fn sector_sizes(id: &[usize]) -> Vec<usize> {
    let k = id.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &s in id {
        sizes[s] += 1;
    }
    sizes
}

/// Whether one step of T annihilates the sector-mean-free subspace (as at the
/// fixed points, where T projects onto the uniform state of each sector), so
/// every non-Perron eigenvalue vanishes. Returns the sector count.
fn vanishing_check(ring: &Ring, id: &[usize]) -> Option<usize> {
    let sizes = sector_sizes(id);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd);
    let mut q = DMatrix::from_fn(ring.dim, 2, |_, _| rng.gen::<f64>() - 0.5);
    project(&mut q, id, &sizes);
    let start = q.norm();
    if start == 0.0 {
        return Some(sizes.len());
    }
    let mut scratch = vec![0.0; ring.dim];
    for mut col in q.column_iter_mut() {
        let mut v: Vec<f64> = col.iter().copied().collect();
        ring.apply(&mut v, &mut scratch);
        col.copy_from_slice(&v);
    }
    project(&mut q, id, &sizes);
    (q.norm() < 1e-13 * start).then_some(sizes.len())
}

/// Subtracts each sector's mean so that the columns carry no Perron component.
fn project(q: &mut DMatrix<f64>, id: &[usize], sizes: &[usize]) {
    let mut sums = vec![0.0; sizes.len()];
    for mut col in q.column_iter_mut() {
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (i, &x) in col.iter().enumerate() {
            sums[id[i]] += x;
        }
        for (i, x) in col.iter_mut().enumerate() {
            *x -= sums[id[i]] / sizes[id[i]] as f64;
        }
    }
}

fn orthonormalize(q: DMatrix<f64>) -> DMatrix<f64> {
    q.qr().q()
}

/// Subspace iteration with Rayleigh–Ritz on the sector-mean-free subspace.
fn iterative_spectrum(ring: &Ring, block: usize, seed: u64) -> Result<TransferSpectrum> {
    if !ring.moves_symmetric() {
        return Err(Error::Unsupported("iterative mode needs reversible moves that include staying put".into()));
    }
    let id = ring.move_components();
    let sizes = sector_sizes(&id);
    let k = sizes.len();
    if vanishing_check(ring, &id).is_some() {
        return finish(ring.l, k, vec![], SolveMode::Iterative, 0.0, 0);
    }
    let free = ring.dim - k;
    let m = block.min(free);
    if m == 0 {
        return finish(ring.l, k, vec![], SolveMode::Iterative, 0.0, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = DMatrix::from_fn(ring.dim, m, |_, _| rng.gen::<f64>() - 0.5);
    project(&mut q, &id, &sizes);
    q = orthonormalize(q);
    let mut scratch = vec![0.0; ring.dim];
    let apply_block = |q: &DMatrix<f64>, scratch: &mut Vec<f64>| -> DMatrix<f64> {
        let mut z = q.clone();
        for mut col in z.column_iter_mut() {
            let mut v: Vec<f64> = col.iter().copied().collect();
            ring.apply(&mut v, scratch);
            col.copy_from_slice(&v);
        }
        z
    };
    let mut last = f64::NAN;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let mut z = apply_block(&q, &mut scratch);
        project(&mut z, &id, &sizes);
        let h = q.transpose() * &z;
        let mut ritz = dense_eigenvalues(&h)?;
        sort_desc(&mut ritz);
        let top = ritz[0];
        // Residual of the leading Ritz pair.
        let hc = h.map(|x| Complex64::new(x, 0.0));
        let shifted = &hc - DMatrix::<Complex64>::identity(m, m) * top;
        let y = null_vector(&shifted);
        let qc = q.map(|x| Complex64::new(x, 0.0));
        let zc = z.map(|x| Complex64::new(x, 0.0));
        let r: DVector<Complex64> = &zc * &y - (&qc * &y) * top;
        residual = r.norm();
        if residual < EIGEN_TOL && (top.norm() - last).abs() < EIGEN_TOL {
            return finish(ring.l, k, ritz, SolveMode::Iterative, residual, it);
        }
        last = top.norm();
        q = orthonormalize(z);
    }
    Err(Error::NotConverged { iterations: MAX_ITERATIONS, residual })
}

/// Unit vector minimizing ‖A y‖ (smallest right singular vector).
fn null_vector(a: &DMatrix<Complex64>) -> DVector<Complex64> {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let (k, _) = svd.singular_values.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    vt.row(k).adjoint()
}

/// Spectrum of the transfer operator of `rule` on a ring of `l` sites.
pub fn correlation_length(rule: &StochasticRule, l: usize, mode: SolveMode) -> Result<TransferSpectrum> {
    let dim = checked_pow(rule.modulus(), l).unwrap_or(usize::MAX);
    let mode = match mode {
        SolveMode::Auto if dim <= DENSE_CAP => SolveMode::Dense,
        SolveMode::Auto => SolveMode::Iterative,
        m => m,
    };
    match mode {
        SolveMode::Dense => {
            let ring = Ring::new(rule, l, DENSE_CAP)?;
            dense_spectrum(&ring)
        }
        _ => iterative_spectrum(&Ring::new(rule, l, ITERATIVE_CAP)?, 8, 0x5eed),
    }
}

/// Exact C(r) = ⟨ω^{k(n_x(0) − n_x(r))}⟩ on a ring of `l` sites started from the
/// uniform product distribution, averaged over sites, for r = 1..=r_max double layers.
pub fn ring_correlator(rule: &StochasticRule, l: usize, k: i64, r_max: usize) -> Result<Vec<Complex64>> {
    let ring = Ring::new(rule, l, ITERATIVE_CAP)?;
    let n = ring.n;
    let mut out = vec![Complex64::new(0.0, 0.0); r_max];
    let mut scratch = vec![0.0; ring.dim];
    // Sites 0 and 1 represent the two sublattices of the brickwork.
    for x in 0..2 {
        let label = |idx: usize| ((idx / ring.places[x]) % n) as i64;
        let p0 = 1.0 / ring.dim as f64;
        let mut re: Vec<f64> = (0..ring.dim).map(|i| p0 * phase(k * label(i), n).re).collect();
        let mut im: Vec<f64> = (0..ring.dim).map(|i| p0 * phase(k * label(i), n).im).collect();
        for slot in out.iter_mut() {
            ring.apply(&mut re, &mut scratch);
            ring.apply(&mut im, &mut scratch);
            let c: Complex64 = (0..ring.dim).map(|i| Complex64::new(re[i], im[i]) * phase(-k * label(i), n)).sum();
            *slot += c * 0.5;
        }
    }
    Ok(out)
}

/// One row of a path scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub path: PathName,
    pub g: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub eta2_abs: f64,
    pub xi: f64,
    pub mode: String,
    pub residual: f64,
    /// Closed sectors; above 1 the reported gap is the largest one inside a sector.
    pub sectors: usize,
}

/// ξ(g) along a path at fixed ring width, in grid order.
pub fn path_scan(path: &PathSpec, grid: &[f64], l: usize, mode: SolveMode) -> Result<Vec<ScanRow>> {
    grid.par_iter()
        .map(|&g| {
            let rule = rule_from_single_line(&path.rule_tensor(g)?)?;
            let s = correlation_length(&rule, l, mode)?;
            Ok(ScanRow { path: path.name, g, l, eta2_abs: s.eta2.norm(), xi: s.xi, mode: s.mode.as_str().into(), residual: s.residual, sectors: s.sectors })
        })
        .collect()
}

/// Writes scan rows as CSV with a header.
pub fn write_scan_csv<W: std::io::Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcompile::reduce_double_to_single;
    use crate::paths::{path_tc_ds, path_z22_to_critical};
    use crate::tensors::toric_code_single_line;

    fn rule(w: &crate::tensors::WSingleLine) -> StochasticRule {
        rule_from_single_line(w).unwrap()
    }

    #[test]
    fn ring_correlator_of_fixed_point_vanishes() {
        let rule = rule_from_single_line(&crate::tensors::toric_code_single_line(2)).unwrap();
        let c = ring_correlator(&rule, 6, 1, 3).unwrap();
        assert!(c.iter().all(|z| z.norm() < 1e-14), "{c:?}");
        let id = StochasticRule::from_probabilities(2, (0..16).map(|i| if i / 4 == i % 4 { 1.0 } else { 0.0 }).collect()).unwrap();
        assert!(ring_correlator(&id, 4, 1, 2).unwrap().iter().all(|z| (z - 1.0).norm() < 1e-14));
    }

    #[test]
    fn identity_rule_gives_identity() {
        let probs = (0..16).map(|i| if i / 4 == i % 4 { 1.0 } else { 0.0 }).collect();
        let r = StochasticRule::from_probabilities(2, probs).unwrap();
        let t = build_transfer_operator(&r, 4).unwrap();
        assert_eq!(t, DMatrix::identity(16, 16));
    }

    #[test]
    fn columns_sum_to_one() {
        for w in [toric_code_single_line(2), path_z22_to_critical(0.4).unwrap()] {
            let t = build_transfer_operator(&rule(&w), 4).unwrap();
            for c in t.column_iter() {
                assert!((c.sum() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn critical_rule_is_block_diagonal_in_staggered_charge() {
        let r = rule(&reduce_double_to_single(&path_tc_ds(0.0).unwrap()).unwrap());
        let l = 4;
        let t = build_transfer_operator(&r, l).unwrap();
        let q = |idx: usize| -> i64 { (0..l).map(|s| if s % 2 == 0 { 1 } else { -1 } * ((idx >> (l - 1 - s)) & 1) as i64).sum() };
        let mut blocks = std::collections::BTreeSet::new();
        for i in 0..16 {
            blocks.insert(q(i));
            for j in 0..16 {
                if q(i) != q(j) {
                    assert_eq!(t[(i, j)], 0.0);
                }
            }
        }
        let s = correlation_length(&r, l, SolveMode::Dense).unwrap();
        assert_eq!(s.sectors, blocks.len());
    }

    #[test]
    fn fixed_point_has_zero_correlation_length() {
        for n in [2, 4] {
            let s = correlation_length(&rule(&toric_code_single_line(n)), 4, SolveMode::Auto).unwrap();
            assert!(s.eta2.norm() < 1e-10, "{s:?}");
            assert_eq!(s.xi, 0.0);
            assert!((s.leading_eigenvalues[0] - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn dense_and_iterative_agree() {
        let r = rule(&path_z22_to_critical(0.5).unwrap());
        let d = correlation_length(&r, 4, SolveMode::Dense).unwrap();
        let i = correlation_length(&r, 4, SolveMode::Iterative).unwrap();
        assert!((d.eta2.norm() - i.eta2.norm()).abs() < 1e-8, "{} {}", d.eta2, i.eta2);
        assert_eq!(d.sectors, i.sectors);
    }

    #[test]
    fn xi_grows_toward_the_critical_point() {
        let spec = PathSpec::new(PathName::TcDs, None).unwrap();
        let rows = path_scan(&spec, &[1.0, 0.75, 0.5, 0.25, 0.1], 6, SolveMode::Auto).unwrap();
        assert!(rows[0].xi < 1e-9);
        assert!(rows.windows(2).all(|w| w[1].xi > w[0].xi), "{rows:?}");
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("path,g,L,eta2_abs,xi,mode,residual,sectors\n"));
        assert!(text.contains("tc-ds,"));
    }

    #[test]
    fn xi_conventions() {
        assert_eq!(xi_from_eta(0.0), 0.0);
        assert!(xi_from_eta(1.0).is_infinite());
        assert!((xi_from_eta((-0.5f64).exp()) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn odd_ring_rejected() {
        assert!(build_transfer_operator(&rule(&toric_code_single_line(2)), 5).is_err());
    }
}
