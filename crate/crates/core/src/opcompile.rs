//! Compiles generalized Pauli strings into products of local diagonal factors.
//!
//! For a state with amplitudes α_c, ⟨ψ|O|ψ⟩ = Σ_c |α_c|² · conj(α_{F(c)}/α_c) · φ(c),
//! where F shifts the labels by the X powers and φ collects the Z phases. Since
//! α_c is a product of local tensor entries, the ratio factorizes over the vertices
//! (single-line) or over clusters of shifted plaquettes (double-line).

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, PatchKind, PlaquetteId, VertexId};
use crate::network::{DoubleLineNet, SingleLineNet};
use crate::tensors::{ADoubleLine, WSingleLine};
use crate::zn::{phase, EdgeId, PauliString};

/// Largest table a single factor may hold.
pub const FACTOR_CAP: usize = 1 << 20;

/// A diagonal function of the labels on `edges`; `table` is indexed with the first
/// edge as the most significant base-N digit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFactor {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub table: Vec<Complex64>,
}

impl LocalFactor {
    #[inline]
    pub fn value(&self, labels: &[usize], n: usize) -> Complex64 {
        let mut idx = 0;
        for &e in &self.edges {
            idx = idx * n + labels[e];
        }
        self.table[idx]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompiledDiagonal {
    pub modulus: usize,
    pub factors: Vec<LocalFactor>,
    /// Largest |ratio| entering any table; a variance proxy for samplers.
    pub max_ratio: f64,
    pub source: PauliString,
}

impl CompiledDiagonal {
    /// Product of all factors on a full edge labelling.
    pub fn evaluate(&self, labels: &[usize]) -> Complex64 {
        self.factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * f.value(labels, self.modulus))
    }

    pub fn support_vertices(&self) -> BTreeSet<VertexId> {
        self.factors.iter().flat_map(|f| f.vertices.iter().copied()).collect()
    }

    pub fn max_edge(&self) -> Option<EdgeId> {
        self.factors.iter().flat_map(|f| f.edges.iter().copied()).max()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Result of compiling an operator on a double-line state.
#[derive(Clone, Debug, PartialEq)]
pub enum Compiled {
    Diagonal(CompiledDiagonal),
    /// The shifted configurations leave the closed-loop subspace, so ⟨O⟩ = 0.
    Annihilates,
}

fn check_edges(geo: &PatchGeometry, op: &PauliString) -> Result<()> {
    match op.iter().find(|(e, _)| *e >= geo.num_edges()) {
        Some((e, _)) => Err(Error::EdgeOutsidePatch(e)),
        None => Ok(()),
    }
}

/// Vertex that carries the Z phase of edge `e`: its consumer, else its producer.
fn z_home(geo: &PatchGeometry, e: EdgeId) -> Option<VertexId> {
    let edge = &geo.edges[e];
    edge.target.or(edge.source).map(|(v, _)| v)
}

fn boundary_ratio(amp_old: Complex64, amp_new: Complex64) -> Option<Complex64> {
    if amp_old.norm_sqr() == 0.0 {
        None
    } else {
        Some((amp_new / amp_old).conj())
    }
}

pub fn compile_single_line(net: &SingleLineNet, op: &PauliString) -> Result<CompiledDiagonal> {
    let geo = &net.geometry;
    check_edges(geo, op)?;
    let n = net.modulus();
    if op.modulus() as usize != n {
        return Err(Error::Dimension(format!("operator is Z_{} but network is Z_{n}", op.modulus())));
    }
    let torus = geo.kind == PatchKind::Torus;
    let xs: Vec<i64> = (0..geo.num_edges()).map(|e| op.get(e).map_or(0, |f| f.x as i64)).collect();
    // Vertices whose table is needed, and loose edges with no vertex at all.
    let mut touched: BTreeSet<VertexId> = BTreeSet::new();
    let mut loose: Vec<EdgeId> = Vec::new();
    for (e, f) in op.iter() {
        let edge = &geo.edges[e];
        if f.x != 0 {
            for (v, _) in [edge.source, edge.target].into_iter().flatten() {
                touched.insert(v);
            }
        }
        if f.z != 0 {
            if let Some(v) = z_home(geo, e) {
                touched.insert(v);
            }
        }
        if edge.source.is_none() && edge.target.is_none() {
            loose.push(e);
        }
    }
    let mut factors = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for &v in &touched {
        let vert = &geo.vertices[v];
        let w = &net.tensors[v];
        let shift: [usize; 4] = std::array::from_fn(|k| xs[vert.edges[k]].rem_euclid(n as i64) as usize);
        let has_x = shift.iter().any(|&s| s != 0);
        let mut table = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let labels = [a, b, c, d];
                        let mut val = Complex64::new(1.0, 0.0);
                        let old = w.get(a, b, c, d);
                        let mut zero = false;
                        if has_x {
                            if old.norm_sqr() == 0.0 {
                                zero = true;
                            } else {
                                let new = w.get((a + shift[0]) % n, (b + shift[1]) % n, (c + shift[2]) % n, (d + shift[3]) % n);
                                let r = (new / old).conj();
                                max_ratio = max_ratio.max(r.norm());
                                val *= r;
                            }
                        }
                        for k in 0..2 {
                            let e = vert.edges[k];
                            if !torus && geo.is_boundary_input(e) && shift[k] != 0 && !zero {
                                let site = geo.edges[e].site;
                                match boundary_ratio(net.boundary.amplitude(site, labels[k]), net.boundary.amplitude(site, (labels[k] + shift[k]) % n)) {
                                    Some(r) => {
                                        max_ratio = max_ratio.max(r.norm());
                                        val *= r;
                                    }
                                    None => zero = true,
                                }
                            }
                        }
                        if zero {
                            val = Complex64::new(1.0, 0.0);
                        }
                        for (k, &e) in vert.edges.iter().enumerate() {
                            if let Some(f) = op.get(e) {
                                if f.z != 0 && z_home(geo, e) == Some(v) {
                                    val *= phase(f.z as i64 * ((labels[k] + shift[k]) % n) as i64, n);
                                }
                            }
                        }
                        table.push(val);
                    }
                }
            }
        }
        factors.push(LocalFactor { vertices: vec![v], edges: vert.edges.to_vec(), table });
    }
    for e in loose {
        let f = op.get(e).expect("loose edges come from the operator");
        let site = geo.edges[e].site;
        let table = (0..n)
            .map(|l| {
                let shifted = (l + f.x as usize) % n;
                let r = boundary_ratio(net.boundary.amplitude(site, l), net.boundary.amplitude(site, shifted)).unwrap_or(Complex64::new(1.0, 0.0));
                r * phase(f.z as i64 * shifted as i64, n)
            })
            .collect();
        factors.push(LocalFactor { vertices: vec![], edges: vec![e], table });
    }
    Ok(CompiledDiagonal { modulus: n, factors, max_ratio, source: op.clone() })
}

/// Plaquette height shift realizing the X part of `op`, if the X part is a
/// product of plaquette loops.
pub fn plaquette_shift(geo: &PatchGeometry, op: &PauliString) -> Option<Vec<i64>> {
    let n = op.modulus() as i64;
    let np = geo.num_plaquettes();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![vec![]; np];
    for (e, edge) in geo.edges.iter().enumerate() {
        let x = op.get(e).map_or(0, |f| f.x as i64);
        // s(left) − s(right) = x
        adj[edge.left].push((edge.right, -x));
        adj[edge.right].push((edge.left, x));
    }
    let mut s: Vec<Option<i64>> = vec![None; np];
    let root = geo.reference_plaquette.unwrap_or(0);
    let mut order: Vec<usize> = std::iter::once(root).chain(0..np).collect();
    order.dedup();
    for start in order {
        if s[start].is_some() {
            continue;
        }
        s[start] = Some(0);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            let sp = s[p].unwrap();
            for &(q, d) in &adj[p] {
                let want = (sp + d).rem_euclid(n);
                match s[q] {
                    None => {
                        s[q] = Some(want);
                        stack.push(q);
                    }
                    Some(have) if have != want => return None,
                    _ => {}
                }
            }
        }
    }
    Some(s.into_iter().map(Option::unwrap).collect())
}

pub fn compile_double_line(net: &DoubleLineNet, op: &PauliString) -> Result<Compiled> {
    let geo = &net.geometry;
    check_edges(geo, op)?;
    let n = net.modulus();
    if op.modulus() as usize != n {
        return Err(Error::Dimension(format!("operator is Z_{} but network is Z_{n}", op.modulus())));
    }
    let Some(shift) = plaquette_shift(geo, op) else {
        return Ok(Compiled::Annihilates);
    };
    compile_shift(net, op, &shift).map(Compiled::Diagonal)
}

/// Compiles the product of elementary plaquette loops (each raising one height by 1).
pub fn compile_loop_double_line(net: &DoubleLineNet, plaquettes: &[PlaquetteId]) -> Result<CompiledDiagonal> {
    let geo = &net.geometry;
    let n = net.modulus() as i64;
    let mut shift = vec![0i64; geo.num_plaquettes()];
    for &p in plaquettes {
        if p >= shift.len() {
            return Err(Error::InvalidArgument(format!("plaquette {p} outside the patch")));
        }
        shift[p] += 1;
    }
    let xs = geo.shift_to_edges(&shift);
    let op = PauliString::from_factors(n as u32, xs.iter().enumerate().map(|(e, &x)| (e, 0, x)))?;
    // Normalize against the pinned plaquette so the shift matches `plaquette_shift`.
    if let Some(r) = geo.reference_plaquette {
        let s0 = shift[r];
        for s in &mut shift {
            *s = (*s - s0).rem_euclid(n);
        }
    }
    compile_shift(net, &op, &shift)
}

fn compile_shift(net: &DoubleLineNet, op: &PauliString, shift: &[i64]) -> Result<CompiledDiagonal> {
    let geo = &net.geometry;
    let n = net.modulus();
    let ni = n as i64;
    let shifted = |p: PlaquetteId| shift[p].rem_euclid(ni) != 0;
    // Clusters of affected vertices linked through shifted plaquettes.
    let affected: Vec<VertexId> = (0..geo.num_vertices()).filter(|&v| geo.vertices[v].plaquettes.iter().any(|&p| shifted(p))).collect();
    let mut parent: BTreeMap<VertexId, VertexId> = affected.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            return v;
        }
        let r = find(parent, p);
        parent.insert(v, r);
        r
    }
    for p in 0..geo.num_plaquettes() {
        if !shifted(p) {
            continue;
        }
        let vs = &geo.plaquettes[p].vertices;
        for w in vs.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent.insert(a, b);
            }
        }
    }
    let mut clusters: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &v in &affected {
        let r = find(&mut parent, v);
        clusters.entry(r).or_default().push(v);
    }
    let xs: Vec<usize> = geo.shift_to_edges(shift).iter().map(|x| x.rem_euclid(ni) as usize).collect();
    let mut covered: BTreeSet<EdgeId> = BTreeSet::new();
    let mut factors = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for verts in clusters.values() {
        let edges: Vec<EdgeId> = verts.iter().flat_map(|&v| geo.vertices[v].edges).collect::<BTreeSet<_>>().into_iter().collect();
        let size = crate::zn::checked_pow(n, edges.len())?;
        if size > FACTOR_CAP {
            return Err(Error::CapExceeded { what: "plaquette cluster table".into(), needed: size as u128, cap: FACTOR_CAP as u128 });
        }
        let (table, ratio) = cluster_table(net, verts, &edges, shift, &xs, op)?;
        max_ratio = max_ratio.max(ratio);
        covered.extend(edges.iter().copied());
        factors.push(LocalFactor { vertices: verts.clone(), edges, table });
    }
    // Z phases on edges outside every cluster.
    let mut by_vertex: BTreeMap<Option<VertexId>, Vec<EdgeId>> = BTreeMap::new();
    for (e, f) in op.iter() {
        if covered.contains(&e) || (f.z == 0 && xs[e] == 0) {
            continue;
        }
        by_vertex.entry(z_home(geo, e)).or_default().push(e);
    }
    for (home, edges) in by_vertex {
        let mut table = Vec::with_capacity(n.pow(edges.len() as u32));
        let mut labels = vec![0usize; edges.len()];
        for idx in 0..n.pow(edges.len() as u32) {
            crate::zn::decode(idx, n, &mut labels);
            let mut val = Complex64::new(1.0, 0.0);
            for (k, &e) in edges.iter().enumerate() {
                let f = op.get(e).unwrap();
                val *= phase(f.z as i64 * ((labels[k] + xs[e]) % n) as i64, n);
            }
            table.push(val);
        }
        factors.push(LocalFactor { vertices: home.into_iter().collect(), edges, table });
    }
    Ok(CompiledDiagonal { modulus: n, factors, max_ratio, source: op.clone() })
}

/// Tabulates conj(α(h + s)/α(h)) restricted to one cluster, as a function of the
/// cluster's edge labels. Heights are rebuilt from the labels; inconsistent labels
/// and zero amplitudes get the value 1.
fn cluster_table(
    net: &DoubleLineNet,
    verts: &[VertexId],
    edges: &[EdgeId],
    shift: &[i64],
    xs: &[usize],
    op: &PauliString,
) -> Result<(Vec<Complex64>, f64)> {
    let geo = &net.geometry;
    let n = net.modulus();
    let plaqs: Vec<PlaquetteId> = verts.iter().flat_map(|&v| geo.vertices[v].plaquettes).collect::<BTreeSet<_>>().into_iter().collect();
    let local = |p: PlaquetteId| plaqs.binary_search(&p).unwrap();
    // Spanning order for height reconstruction.
    let root = geo.reference_plaquette.filter(|r| plaqs.contains(r)).unwrap_or(plaqs[0]);
    let pinned = Some(root) == geo.reference_plaquette;
    let mut order: Vec<(usize, usize, usize, bool)> = Vec::new(); // (edge slot, from, to, to is right)
    let mut seen = vec![false; plaqs.len()];
    seen[local(root)] = true;
    let mut frontier = vec![local(root)];
    while let Some(p) = frontier.pop() {
        for (k, &e) in edges.iter().enumerate() {
            let (l, r) = (local(geo.edges[e].left), local(geo.edges[e].right));
            if l == p && !seen[r] {
                seen[r] = true;
                order.push((k, l, r, true));
                frontier.push(r);
            } else if r == p && !seen[l] {
                seen[l] = true;
                order.push((k, r, l, false));
                frontier.push(l);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Unsupported("cluster plaquettes are not connected through cluster edges".into()));
    }
    let roots: Vec<usize> = if pinned { vec![0] } else { (0..n).collect() };
    let mut table = Vec::with_capacity(n.pow(edges.len() as u32));
    let mut labels = vec![0usize; edges.len()];
    let mut h = vec![0usize; plaqs.len()];
    let mut max_ratio: f64 = 0.0;
    let size = n.pow(edges.len() as u32);
    for idx in 0..size {
        crate::zn::decode(idx, n, &mut labels);
        let mut value: Option<Complex64> = None;
        for &r0 in &roots {
            h[local(root)] = r0;
            for &(k, from, to, to_right) in &order {
                // label = h(left) − h(right)
                h[to] = if to_right { (h[from] + n - labels[k]) % n } else { (h[from] + labels[k]) % n };
            }
            let consistent = edges.iter().enumerate().all(|(k, &e)| (h[local(geo.edges[e].left)] + n - h[local(geo.edges[e].right)]) % n == labels[k]);
            let v = if consistent { cluster_ratio(net, verts, &plaqs, &h, shift, edges, &labels, xs) } else { None };
            let v = v.unwrap_or(Complex64::new(1.0, 0.0));
            match value {
                None => value = Some(v),
                Some(prev) if (prev - v).norm() > 1e-12 * (1.0 + prev.norm()) => {
                    return Err(Error::Unsupported("loop ratio depends on absolute heights; pin a reference plaquette inside the cluster".into()));
                }
                _ => {}
            }
        }
        let mut val = value.unwrap();
        max_ratio = max_ratio.max(val.norm());
        for (k, &e) in edges.iter().enumerate() {
            if let Some(f) = op.get(e) {
                if f.z != 0 {
                    val *= phase(f.z as i64 * ((labels[k] + xs[e]) % n) as i64, n);
                }
            }
        }
        table.push(val);
    }
    Ok((table, max_ratio))
}

#[allow(clippy::too_many_arguments)]
fn cluster_ratio(
    net: &DoubleLineNet,
    verts: &[VertexId],
    plaqs: &[PlaquetteId],
    h: &[usize],
    shift: &[i64],
    edges: &[EdgeId],
    labels: &[usize],
    xs: &[usize],
) -> Option<Complex64> {
    let geo = &net.geometry;
    let n = net.modulus();
    let hp = |p: PlaquetteId| h[plaqs.binary_search(&p).unwrap()];
    let sp = |p: PlaquetteId| shift[p].rem_euclid(n as i64) as usize;
    let mut val = Complex64::new(1.0, 0.0);
    for &v in verts {
        let [pa, pc, pd, pb] = geo.vertices[v].plaquettes;
        let a = &net.tensors[v];
        let old = a.get(hp(pa), hp(pc), hp(pd), hp(pb));
        if old.norm_sqr() == 0.0 {
            return None;
        }
        let new = a.get(hp(pa) + sp(pa), hp(pc) + sp(pc), hp(pd) + sp(pd), hp(pb) + sp(pb));
        val *= (new / old).conj();
    }
    if geo.kind != PatchKind::Torus {
        for (k, &e) in edges.iter().enumerate() {
            if xs[e] != 0 && geo.is_boundary_input(e) {
                let site = geo.edges[e].site;
                val *= boundary_ratio(net.boundary.amplitude(site, labels[k]), net.boundary.amplitude(site, (labels[k] + xs[e]) % n))?;
            }
        }
    }
    Some(val)
}

/// Single-line tensor on domain walls whose |W|² reproduces |A|²; phases are dropped.
/// W[(σ,ρ),(μ,ν)] = |A[0][−σ][−σ−ρ][−μ]| when σ + ρ = μ + ν, else 0.
pub fn reduce_double_to_single(a: &ADoubleLine) -> Result<WSingleLine> {
    let n = a.modulus();
    for x in 0..n {
        for c in 0..n {
            for d in 0..n {
                for b in 0..n {
                    for k in 1..n {
                        if (a.get(x, c, d, b).norm() - a.get(x + k, c + k, d + k, b + k).norm()).abs() > 1e-12 {
                            return Err(Error::Unsupported("|A| is not invariant under a global height shift".into()));
                        }
                    }
                }
            }
        }
    }
    let neg = |v: usize| (n - v % n) % n;
    Ok(WSingleLine::from_fn(n, |s, r, m, v| {
        if (s + r) % n != (m + v) % n {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(a.get(0, neg(s), neg(s + r), neg(m)).norm(), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PatchGeometry;
    use crate::paths::path_tc_ds;
    use crate::tensors::{double_semion_double_line, toric_code_double_line, toric_code_single_line};

    #[test]
    fn reduce_fixed_points() {
        let tc = reduce_double_to_single(&toric_code_double_line(2)).unwrap();
        assert!(tc.max_abs_diff(&toric_code_single_line(2)) < 1e-15);
        let ds = reduce_double_to_single(&double_semion_double_line()).unwrap();
        assert!(ds.max_abs_diff(&tc) < 1e-15);
        for n in 3..6 {
            let w = reduce_double_to_single(&toric_code_double_line(n)).unwrap();
            assert!(w.max_abs_diff(&toric_code_single_line(n)) < 1e-15);
        }
    }

    #[test]
    fn reduce_is_blind_to_sign_of_g() {
        for g in [0.1, 0.37, 0.8, 1.0] {
            let p = reduce_double_to_single(&path_tc_ds(g).unwrap()).unwrap();
            let m = reduce_double_to_single(&path_tc_ds(-g).unwrap()).unwrap();
            assert_eq!(p, m);
            assert!(p.normalization_residual() < 1e-14);
        }
        let w0 = reduce_double_to_single(&path_tc_ds(0.0).unwrap()).unwrap();
        assert_eq!(w0.get(0, 1, 1, 0).norm(), 0.0);
        assert_eq!(w0.get(1, 0, 0, 1).norm(), 0.0);
    }

    #[test]
    fn reduce_rejects_height_dependent_magnitudes() {
        let a = ADoubleLine::from_fn(2, |x, _, _, b| Complex64::new(if x == 0 { if b == 0 { 1.0 } else { 0.0 } } else { std::f64::consts::FRAC_1_SQRT_2 }, 0.0));
        assert!(reduce_double_to_single(&a).is_err());
    }

    #[test]
    fn empty_string_compiles_to_nothing() {
        let geo = PatchGeometry::open(4, 2).unwrap();
        let net = SingleLineNet::uniform(geo, toric_code_single_line(2), None).unwrap();
        let c = compile_single_line(&net, &PauliString::identity(2)).unwrap();
        assert!(c.factors.is_empty());
        assert_eq!(c.evaluate(&vec![0; 10]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_z_is_one_factor_with_clock_phase() {
        let geo = PatchGeometry::open(4, 2).unwrap();
        let net = SingleLineNet::uniform(geo, toric_code_single_line(3), None).unwrap();
        let op = PauliString::from_factors(3, [(5, 1, 0)]).unwrap();
        let c = compile_single_line(&net, &op).unwrap();
        assert_eq!(c.factors.len(), 1);
        let mut labels = vec![0; 10];
        for l in 0..3 {
            labels[5] = l;
            assert!((c.evaluate(&labels) - phase(l as i64, 3)).norm() < 1e-15);
        }
    }

    #[test]
    fn edge_outside_patch_is_rejected() {
        let geo = PatchGeometry::open(2, 1).unwrap();
        let net = SingleLineNet::uniform(geo, toric_code_single_line(2), None).unwrap();
        let op = PauliString::from_factors(2, [(99, 1, 0)]).unwrap();
        assert!(matches!(compile_single_line(&net, &op), Err(Error::EdgeOutsidePatch(99))));
    }

    #[test]
    fn open_string_annihilates_double_line() {
        let geo = PatchGeometry::open(4, 4).unwrap();
        let net = DoubleLineNet::uniform(geo, double_semion_double_line(), None).unwrap();
        let op = PauliString::from_factors(2, [(6, 0, 1)]).unwrap();
        assert_eq!(compile_double_line(&net, &op).unwrap(), Compiled::Annihilates);
    }

    #[test]
    fn toric_code_plaquette_compiles_to_ones() {
        let geo = PatchGeometry::open(4, 4).unwrap();
        let p = geo.interior_plaquettes()[0];
        let net = DoubleLineNet::uniform(geo, toric_code_double_line(2), None).unwrap();
        let c = compile_loop_double_line(&net, &[p]).unwrap();
        assert!(!c.factors.is_empty());
        assert!(c.support_vertices().len() <= 4);
        for f in &c.factors {
            assert!(f.table.iter().all(|z| (z - 1.0).norm() < 1e-15));
        }
    }

    #[test]
    fn json_roundtrip() {
        let geo = PatchGeometry::open(4, 2).unwrap();
        let net = SingleLineNet::uniform(geo, crate::paths::path_z22_to_critical(0.5).unwrap(), None).unwrap();
        let op = PauliString::from_factors(4, [(5, 1, 2), (6, 0, 3)]).unwrap();
        let c = compile_single_line(&net, &op).unwrap();
        let back = CompiledDiagonal::from_json(&c.to_json()).unwrap();
        assert_eq!(back.factors.len(), c.factors.len());
        for (x, y) in back.factors.iter().zip(&c.factors) {
            assert_eq!(x.edges, y.edges);
            for (p, q) in x.table.iter().zip(&y.table) {
                assert!((p - q).norm() < 1e-15);
            }
        }
    }
}
