//! Exact brute-force states on small patches.
//!
//! Amplitudes are stored densely over all edge labellings, edge 0 being the most
//! significant base-N digit.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, PatchKind};
use crate::network::{DoubleLineNet, SingleLineNet};
use crate::opcompile::CompiledDiagonal;
use crate::zn::{checked_pow, decode, EdgeId, PauliString};

pub use crate::geometry::PatchGeometry as Geometry;

/// Default limit on dense amplitude vectors.
pub const ORACLE_CAP: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct ExactState {
    pub geometry: PatchGeometry,
    pub modulus: usize,
    pub amplitudes: Vec<Complex64>,
    pub norm_sqr: f64,
}

fn cap_check(what: &str, n: usize, k: usize, cap: usize) -> Result<usize> {
    let size = checked_pow(n, k).map_err(|_| Error::CapExceeded { what: what.into(), needed: u128::MAX, cap: cap as u128 })?;
    if size > cap {
        return Err(Error::CapExceeded { what: what.into(), needed: size as u128, cap: cap as u128 });
    }
    Ok(size)
}

/// Contracts a single-line net by building the state edge by edge: initial edges
/// carry the boundary amplitudes (or are free on a torus), each vertex multiplies
/// in its W entry and either appends its output edges or, on a torus, enforces
/// that they match the edges they close onto.
pub fn contract_single_line(net: &SingleLineNet, cap: usize) -> Result<ExactState> {
    let geo = &net.geometry;
    let n = net.modulus();
    let total = geo.num_edges();
    cap_check("amplitude vector", n, total, cap)?;
    let torus = geo.kind == PatchKind::Torus;
    let w0 = geo.width;
    // Edges 0..width exist from the start in every geometry.
    let mut state: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); n.pow(w0 as u32)];
    if !torus {
        let mut digits = vec![0; w0];
        for (idx, amp) in state.iter_mut().enumerate() {
            decode(idx, n, &mut digits);
            for (s, &l) in digits.iter().enumerate() {
                *amp *= net.boundary.amplitude(s, l);
            }
        }
    }
    let mut known = w0;
    let digit = |idx: usize, e: EdgeId, known: usize| (idx / n.pow((known - 1 - e) as u32)) % n;
    for (v, vert) in geo.vertices.iter().enumerate() {
        let w = &net.tensors[v];
        let [a, b, c, d] = vert.edges;
        let fresh_c = c == known;
        let fresh_d = d == known + fresh_c as usize;
        if fresh_c != fresh_d {
            return Err(Error::InvalidArgument("vertex outputs are not consecutive edges".into()));
        }
        if fresh_c {
            let mut next = vec![Complex64::new(0.0, 0.0); state.len() * n * n];
            for (idx, amp) in state.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let (la, lb) = (digit(idx, a, known), digit(idx, b, known));
                for lc in 0..n {
                    for ld in 0..n {
                        next[(idx * n + lc) * n + ld] = amp * w.get(la, lb, lc, ld);
                    }
                }
            }
            state = next;
            known += 2;
        } else {
            for (idx, amp) in state.iter_mut().enumerate() {
                let (la, lb, lc, ld) = (digit(idx, a, known), digit(idx, b, known), digit(idx, c, known), digit(idx, d, known));
                *amp *= w.get(la, lb, lc, ld);
            }
        }
    }
    if known != total {
        return Err(Error::InvalidArgument(format!("contracted {known} of {total} edges")));
    }
    Ok(ExactState::new(geo.clone(), n, state))
}

/// Contracts a double-line net by summing over all plaquette heights (the pinned
/// reference plaquette of an open chain is held at 0).
pub fn contract_double_line(net: &DoubleLineNet, cap: usize) -> Result<ExactState> {
    let geo = &net.geometry;
    let n = net.modulus();
    let np = geo.num_plaquettes();
    let size = cap_check("amplitude vector", n, geo.num_edges(), cap)?;
    let free: Vec<usize> = (0..np).filter(|&p| Some(p) != geo.reference_plaquette).collect();
    let configs = cap_check("height configurations", n, free.len(), cap)?;
    let torus = geo.kind == PatchKind::Torus;
    let mut state = vec![Complex64::new(0.0, 0.0); size];
    let mut h = vec![0usize; np];
    let mut digits = vec![0usize; free.len()];
    for k in 0..configs {
        decode(k, n, &mut digits);
        for (i, &p) in free.iter().enumerate() {
            h[p] = digits[i];
        }
        let mut amp = Complex64::new(1.0, 0.0);
        for (v, vert) in geo.vertices.iter().enumerate() {
            let [pa, pc, pd, pb] = vert.plaquettes;
            amp *= net.tensors[v].get(h[pa], h[pc], h[pd], h[pb]);
            if amp.norm_sqr() == 0.0 {
                break;
            }
        }
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut idx = 0usize;
        for (e, edge) in geo.edges.iter().enumerate() {
            let label = (h[edge.left] + n - h[edge.right]) % n;
            if !torus && e < geo.width && edge.source.is_none() {
                amp *= net.boundary.amplitude(edge.site, label);
            }
            idx = idx * n + label;
        }
        state[idx] += amp;
    }
    Ok(ExactState::new(geo.clone(), n, state))
}

/// Product of W entries over the vertices for one labelling.
pub fn amplitude_product(net: &SingleLineNet, labels: &[usize]) -> Complex64 {
    let geo = &net.geometry;
    let mut amp = Complex64::new(1.0, 0.0);
    if geo.kind != PatchKind::Torus {
        for &e in &geo.initial_edges {
            amp *= net.boundary.amplitude(geo.edges[e].site, labels[e]);
        }
    }
    for (v, vert) in geo.vertices.iter().enumerate() {
        let [a, b, c, d] = vert.edges;
        amp *= net.tensors[v].get(labels[a], labels[b], labels[c], labels[d]);
    }
    amp
}

impl ExactState {
    pub fn new(geometry: PatchGeometry, modulus: usize, amplitudes: Vec<Complex64>) -> Self {
        let norm_sqr = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        Self { geometry, modulus, amplitudes, norm_sqr }
    }

    pub fn num_edges(&self) -> usize {
        self.geometry.num_edges()
    }

    pub fn labels(&self, idx: usize) -> Vec<usize> {
        let mut l = vec![0; self.num_edges()];
        decode(idx, self.modulus, &mut l);
        l
    }

    pub fn index(&self, labels: &[usize]) -> usize {
        labels.iter().fold(0, |acc, &l| acc * self.modulus + l)
    }

    /// ⟨ψ|O|ψ⟩/⟨ψ|ψ⟩ for a Pauli string.
    pub fn expectation_pauli(&self, op: &PauliString) -> Result<Complex64> {
        if let Some((e, _)) = op.iter().find(|(e, _)| *e >= self.num_edges()) {
            return Err(Error::EdgeOutsidePatch(e));
        }
        let n = self.modulus;
        let k = self.num_edges();
        let factors: Vec<_> = op.iter().collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut out = idx;
            let mut ph = Complex64::new(1.0, 0.0);
            for &(e, f) in &factors {
                let place = n.pow((k - 1 - e) as u32);
                let l = (idx / place) % n;
                let (l2, p) = f.act(l, n);
                out = out - l * place + l2 * place;
                ph *= p;
            }
            acc += self.amplitudes[out].conj() * ph * amp;
        }
        Ok(acc / self.norm_sqr)
    }

    /// Σ_c |α_c|² D(c) / Σ_c |α_c|² for a compiled diagonal.
    pub fn expectation_diagonal(&self, d: &CompiledDiagonal) -> Result<Complex64> {
        if let Some(e) = d.max_edge().filter(|&e| e >= self.num_edges()) {
            return Err(Error::EdgeOutsidePatch(e));
        }
        let mut labels = vec![0; self.num_edges()];
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            decode(idx, self.modulus, &mut labels);
            acc += d.evaluate(&labels) * p;
        }
        Ok(acc / self.norm_sqr)
    }

    /// Expectation of a dense operator acting on `edges` (first edge most significant).
    pub fn expectation_dense(&self, op: &DMatrix<Complex64>, edges: &[EdgeId]) -> Result<Complex64> {
        let n = self.modulus;
        let k = self.num_edges();
        if let Some(&e) = edges.iter().find(|&&e| e >= k) {
            return Err(Error::EdgeOutsidePatch(e));
        }
        let dim = n.pow(edges.len() as u32);
        if op.nrows() != dim || op.ncols() != dim {
            return Err(Error::Dimension(format!("operator must be {dim}x{dim}")));
        }
        let places: Vec<usize> = edges.iter().map(|&e| n.pow((k - 1 - e) as u32)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut col = 0;
            let mut base = idx;
            for &p in &places {
                let l = (idx / p) % n;
                col = col * n + l;
                base -= l * p;
            }
            for row in 0..dim {
                let m = op[(row, col)];
                if m.norm_sqr() == 0.0 {
                    continue;
                }
                let mut out = base;
                let mut r = row;
                for &p in places.iter().rev() {
                    out += (r % n) * p;
                    r /= n;
                }
                acc += self.amplitudes[out].conj() * m * amp;
            }
        }
        Ok(acc / self.norm_sqr)
    }

    /// |⟨ψ|φ⟩|² / (⟨ψ|ψ⟩⟨φ|φ⟩)
    pub fn fidelity(&self, other: &[Complex64]) -> f64 {
        let ov: Complex64 = self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum();
        let on: f64 = other.iter().map(|z| z.norm_sqr()).sum();
        ov.norm_sqr() / (self.norm_sqr * on)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{DoubleLineNet, SingleLineNet};
    use crate::opcompile::{compile_loop_double_line, compile_single_line, reduce_double_to_single};
    use crate::paths::path_tc_ds;
    use crate::tensors::{double_semion_double_line, toric_code_double_line, toric_code_single_line};

    #[test]
    fn toric_code_patch_is_equal_weight() {
        let net = SingleLineNet::uniform(PatchGeometry::open(4, 2).unwrap(), toric_code_single_line(2), None).unwrap();
        let st = contract_single_line(&net, ORACLE_CAP).unwrap();
        let mags: Vec<f64> = st.amplitudes.iter().map(|z| z.norm()).filter(|&m| m > 0.0).collect();
        assert!(mags.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-15));
        assert!((st.norm_sqr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_line_amplitudes_factorize() {
        let geo = PatchGeometry::open(3, 3).unwrap();
        let net = SingleLineNet::uniform(geo, crate::paths::path_set_frac(-0.4, 4).unwrap(), None).unwrap();
        let st = contract_single_line(&net, ORACLE_CAP).unwrap();
        for idx in 0..st.amplitudes.len() {
            let l = st.labels(idx);
            assert!((st.amplitudes[idx] - amplitude_product(&net, &l)).norm() < 1e-12);
        }
    }

    #[test]
    fn torus_contraction_factorizes() {
        let geo = PatchGeometry::torus(4, 2).unwrap();
        let net = SingleLineNet::uniform(geo, crate::paths::path_z22_to_critical(0.3).unwrap(), None).unwrap();
        let st = contract_single_line(&net, ORACLE_CAP).unwrap();
        for idx in 0..st.amplitudes.len() {
            let l = st.labels(idx);
            assert!((st.amplitudes[idx] - amplitude_product(&net, &l)).norm() < 1e-12);
        }
    }

    #[test]
    fn double_semion_differs_from_toric_code_only_in_sign() {
        let geo = PatchGeometry::open(4, 3).unwrap();
        let tc = contract_double_line(&DoubleLineNet::uniform(geo.clone(), toric_code_double_line(2), None).unwrap(), ORACLE_CAP).unwrap();
        let ds = contract_double_line(&DoubleLineNet::uniform(geo, double_semion_double_line(), None).unwrap(), ORACLE_CAP).unwrap();
        let mut negative = 0;
        for (a, b) in tc.amplitudes.iter().zip(&ds.amplitudes) {
            assert!((a.norm() - b.norm()).abs() < 1e-14);
            if (a + b).norm() < 1e-14 && a.norm() > 0.0 {
                negative += 1;
            }
        }
        assert!(negative > 0);
    }

    #[test]
    fn deformed_double_line_is_normalized() {
        let geo = PatchGeometry::open(4, 3).unwrap();
        let st = contract_double_line(&DoubleLineNet::uniform(geo, path_tc_ds(0.5).unwrap(), None).unwrap(), ORACLE_CAP).unwrap();
        assert!((st.norm_sqr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simple_expectations() {
        let geo = PatchGeometry::open(4, 2).unwrap();
        let net = SingleLineNet::uniform(geo, toric_code_single_line(2), None).unwrap();
        let st = contract_single_line(&net, ORACLE_CAP).unwrap();
        assert!((st.expectation_pauli(&PauliString::identity(2)).unwrap() - 1.0).norm() < 1e-14);
        let x = PauliString::from_factors(2, [(5, 0, 1)]).unwrap();
        assert!(st.expectation_pauli(&x).unwrap().norm() < 1e-14);
        let c = compile_single_line(&net, &x).unwrap();
        assert!(st.expectation_diagonal(&c).unwrap().norm() < 1e-14);
        let dense = PauliString::from_factors(2, [(0, 0, 1)]).unwrap().to_dense(1).unwrap();
        assert!(st.expectation_dense(&dense, &[5]).unwrap().norm() < 1e-14);
        assert!(st.expectation_pauli(&PauliString::from_factors(2, [(50, 1, 0)]).unwrap()).is_err());
    }

    #[test]
    fn plaquette_loop_on_toric_code_is_one() {
        let geo = PatchGeometry::open(4, 4).unwrap();
        let p = geo.interior_plaquettes()[0];
        let net = DoubleLineNet::uniform(geo.clone(), toric_code_double_line(2), None).unwrap();
        let st = contract_double_line(&net, ORACLE_CAP).unwrap();
        let mut s = vec![0; geo.num_plaquettes()];
        s[p] = 1;
        let xs = geo.shift_to_edges(&s);
        let op = PauliString::from_factors(2, xs.iter().enumerate().map(|(e, &x)| (e, 0, x))).unwrap();
        assert!((st.expectation_pauli(&op).unwrap() - 1.0).norm() < 1e-12);
        let c = compile_loop_double_line(&net, &[p]).unwrap();
        assert!((st.expectation_diagonal(&c).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn double_semion_loop_matches_compiled_diagonal() {
        let geo = PatchGeometry::open(4, 4).unwrap();
        let net = DoubleLineNet::uniform(geo.clone(), double_semion_double_line(), None).unwrap();
        let st = contract_double_line(&net, ORACLE_CAP).unwrap();
        for p in geo.interior_plaquettes() {
            let mut s = vec![0; geo.num_plaquettes()];
            s[p] = 1;
            let xs = geo.shift_to_edges(&s);
            let op = PauliString::from_factors(2, xs.iter().enumerate().map(|(e, &x)| (e, 0, x))).unwrap();
            let exact = st.expectation_pauli(&op).unwrap();
            let c = compile_loop_double_line(&net, &[p]).unwrap();
            assert!((st.expectation_diagonal(&c).unwrap() - exact).norm() < 1e-12, "plaquette {p}");
        }
    }

    #[test]
    fn reduced_rule_reproduces_diagonal_statistics() {
        for g in [-0.8, 0.3] {
            let geo = PatchGeometry::open(4, 3).unwrap();
            let dl = contract_double_line(&DoubleLineNet::uniform(geo.clone(), path_tc_ds(g).unwrap(), None).unwrap(), ORACLE_CAP).unwrap();
            let w = reduce_double_to_single(&path_tc_ds(g).unwrap()).unwrap();
            let sl = contract_single_line(&SingleLineNet::uniform(geo, w, None).unwrap(), ORACLE_CAP).unwrap();
            for (a, b) in dl.amplitudes.iter().zip(&sl.amplitudes) {
                assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let net = SingleLineNet::uniform(PatchGeometry::open(8, 6).unwrap(), toric_code_single_line(4), None).unwrap();
        assert!(matches!(contract_single_line(&net, ORACLE_CAP), Err(Error::CapExceeded { .. })));
    }
}
