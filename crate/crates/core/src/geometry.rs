//! Brickwork space-time patches.
//!
//! A patch of `width` sites and `layers` gate layers. Layer `t` applies gates to the
//! site pairs `(s, s+1)` with `s ≡ t (mod 2)`; on an open chain an end site without
//! a partner passes through. Each gate is a vertex:
//!
//! ```text
//!        c        d          time ↑
//!        │        │
//!     ┌──┴────────┴──┐
//!   a'│      W       │d'     plaquettes: a' left, c' lower middle,
//!     └──┬────────┬──┘                   b' upper middle, d' right
//!        │   c'   │
//!        a        b
//! ```
//!
//! Inputs `a` (left site) and `b` (right site), outputs `c` and `d`. Every segment of
//! a site's worldline between two gates is an edge; the first and last segments are
//! boundary edges unless time is periodic. Plaquettes are the segments of the dual
//! sites (between sites); an edge of site `s` separates dual site `s` (its left
//! plaquette) from dual site `s+1` (its right plaquette).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::EdgeId;

pub type VertexId = usize;
pub type PlaquetteId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatchKind {
    OpenPatch,
    Cylinder,
    Torus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub layer: usize,
    pub left_site: usize,
    /// Input a, input b, output c, output d.
    pub edges: [EdgeId; 4],
    /// Plaquettes in tensor order: left, lower middle, right, upper middle.
    pub plaquettes: [PlaquetteId; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub site: usize,
    /// (vertex, slot) producing this edge; slot 2 = c, 3 = d.
    pub source: Option<(VertexId, usize)>,
    /// (vertex, slot) consuming this edge; slot 0 = a, 1 = b.
    pub target: Option<(VertexId, usize)>,
    pub left: PlaquetteId,
    pub right: PlaquetteId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plaquette {
    pub dual_site: usize,
    pub vertices: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchGeometry {
    pub width: usize,
    pub layers: usize,
    pub kind: PatchKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub plaquettes: Vec<Plaquette>,
    /// Edge entering each site at t = 0 (empty on a torus).
    pub initial_edges: Vec<EdgeId>,
    /// Plaquette whose height is pinned to 0 in double-line contractions (open chains).
    pub reference_plaquette: Option<PlaquetteId>,
}

impl PatchGeometry {
    /// Open chain, open time.
    pub fn open(width: usize, layers: usize) -> Result<Self> {
        Self::build(width, layers, false, false)
    }

    /// Periodic chain, open time.
    pub fn cylinder(width: usize, layers: usize) -> Result<Self> {
        Self::build(width, layers, true, false)
    }

    /// Periodic chain and periodic time; `width` and `layers` must be even.
    pub fn torus(width: usize, layers: usize) -> Result<Self> {
        Self::build(width, layers, true, true)
    }

    fn build(width: usize, layers: usize, periodic: bool, periodic_time: bool) -> Result<Self> {
        if width < 2 {
            return Err(Error::InvalidArgument("width must be at least 2".into()));
        }
        if periodic && (width % 2 != 0 || width < 4) {
            return Err(Error::InvalidArgument("periodic width must be even and at least 4".into()));
        }
        if periodic_time && (layers % 2 != 0 || layers == 0) {
            return Err(Error::InvalidArgument("periodic time needs an even, nonzero layer count".into()));
        }
        let duals = if periodic { width } else { width + 1 };
        let mut edges: Vec<Edge> = Vec::new();
        let mut plaquettes: Vec<Plaquette> = (0..duals).map(|j| Plaquette { dual_site: j, vertices: vec![] }).collect();
        let mut cur_plaq: Vec<PlaquetteId> = (0..duals).collect();
        let right_dual = |s: usize| if periodic { (s + 1) % width } else { s + 1 };
        let mut cur_edge: Vec<EdgeId> = (0..width)
            .map(|s| {
                edges.push(Edge { site: s, source: None, target: None, left: s, right: right_dual(s) });
                s
            })
            .collect();
        let initial_edges = cur_edge.clone();
        let initial_plaq = cur_plaq.clone();
        let mut vertices = Vec::new();
        for t in 0..layers {
            let mut s = t % 2;
            while s < width {
                let r = s + 1;
                if r >= width && !periodic {
                    break;
                }
                let r = r % width;
                let v = vertices.len();
                let (ea, eb) = (cur_edge[s], cur_edge[r]);
                edges[ea].target = Some((v, 0));
                edges[eb].target = Some((v, 1));
                let pa = cur_plaq[s];
                let pmid = cur_plaq[r];
                let pd = cur_plaq[right_dual(r)];
                let pnew = plaquettes.len();
                plaquettes.push(Plaquette { dual_site: r, vertices: vec![] });
                cur_plaq[r] = pnew;
                let ec = edges.len();
                edges.push(Edge { site: s, source: Some((v, 2)), target: None, left: pa, right: pnew });
                let ed = edges.len();
                edges.push(Edge { site: r, source: Some((v, 3)), target: None, left: pnew, right: pd });
                cur_edge[s] = ec;
                cur_edge[r] = ed;
                vertices.push(Vertex { layer: t, left_site: s, edges: [ea, eb, ec, ed], plaquettes: [pa, pmid, pd, pnew] });
                s += 2;
            }
        }
        let mut geo = Self {
            width,
            layers,
            kind: match (periodic, periodic_time) {
                (false, _) => PatchKind::OpenPatch,
                (true, false) => PatchKind::Cylinder,
                (true, true) => PatchKind::Torus,
            },
            vertices,
            edges,
            plaquettes,
            initial_edges,
            reference_plaquette: if periodic { None } else { Some(0) },
        };
        if periodic_time {
            let edge_pairs: Vec<(usize, usize)> = cur_edge.iter().copied().zip(geo.initial_edges.iter().copied()).collect();
            let plaq_pairs: Vec<(usize, usize)> = cur_plaq.iter().copied().zip(initial_plaq.iter().copied()).collect();
            geo.glue_time(&edge_pairs, &plaq_pairs);
        }
        for (v, vert) in geo.vertices.iter().enumerate() {
            for &p in &vert.plaquettes {
                if !geo.plaquettes[p].vertices.contains(&v) {
                    geo.plaquettes[p].vertices.push(v);
                }
            }
        }
        Ok(geo)
    }

    /// Identifies each final edge/plaquette with the initial one of the same site.
    fn glue_time(&mut self, edge_pairs: &[(EdgeId, EdgeId)], plaq_pairs: &[(PlaquetteId, PlaquetteId)]) {
        let mut emap: Vec<usize> = (0..self.edges.len()).collect();
        for &(fin, init) in edge_pairs {
            emap[fin] = init;
            self.edges[init].source = self.edges[fin].source;
        }
        let mut pmap: Vec<usize> = (0..self.plaquettes.len()).collect();
        for &(fin, init) in plaq_pairs {
            pmap[fin] = init;
        }
        let (edge_new, n_edges) = compact(&emap);
        let (plaq_new, n_plaq) = compact(&pmap);
        let mut edges = vec![None; n_edges];
        for (old, e) in self.edges.iter().enumerate() {
            if emap[old] == old {
                let mut e = e.clone();
                e.left = plaq_new[pmap[e.left]];
                e.right = plaq_new[pmap[e.right]];
                edges[edge_new[old]] = Some(e);
            }
        }
        let mut plaquettes = vec![None; n_plaq];
        for (old, p) in self.plaquettes.iter().enumerate() {
            if pmap[old] == old {
                plaquettes[plaq_new[old]] = Some(p.clone());
            }
        }
        for v in &mut self.vertices {
            for e in &mut v.edges {
                *e = edge_new[emap[*e]];
            }
            for p in &mut v.plaquettes {
                *p = plaq_new[pmap[*p]];
            }
        }
        self.edges = edges.into_iter().map(Option::unwrap).collect();
        self.plaquettes = plaquettes.into_iter().map(Option::unwrap).collect();
        self.initial_edges.clear();
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn is_boundary_input(&self, e: EdgeId) -> bool {
        self.edges[e].source.is_none()
    }

    /// Edge shifts (X powers) produced by raising plaquette heights by `shift`.
    pub fn shift_to_edges(&self, shift: &[i64]) -> Vec<i64> {
        self.edges.iter().map(|e| shift[e.left] - shift[e.right]).collect()
    }

    /// Plaquettes whose lifetime is closed by gates at both ends, i.e. whose height
    /// shift only touches edges internal to the patch in time.
    pub fn interior_plaquettes(&self) -> Vec<PlaquetteId> {
        (0..self.plaquettes.len())
            .filter(|&p| {
                Some(p) != self.reference_plaquette
                    && self.edges.iter().all(|e| (e.left != p && e.right != p) || (e.source.is_some() && e.target.is_some()))
            })
            .collect()
    }
}

/// Product state on the input boundary: one amplitude vector per site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductBoundary {
    pub amplitudes: Vec<Vec<num_complex::Complex64>>,
}

impl ProductBoundary {
    /// |+⟩ = N^{-1/2} Σ_j |j⟩ on every site.
    pub fn plus(n: usize, width: usize) -> Self {
        let v = num_complex::Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Self { amplitudes: vec![vec![v; n]; width] }
    }

    /// The same (normalized) amplitude vector on every site.
    pub fn uniform(amp: Vec<num_complex::Complex64>, width: usize) -> Result<Self> {
        let norm: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { amplitudes: vec![amp; width] })
    }

    pub fn width(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn modulus(&self) -> usize {
        self.amplitudes.first().map_or(0, Vec::len)
    }

    pub fn amplitude(&self, site: usize, label: usize) -> num_complex::Complex64 {
        self.amplitudes[site][label]
    }

    /// Per-site label distributions |amplitude|².
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        self.amplitudes.iter().map(|a| a.iter().map(|z| z.norm_sqr()).collect()).collect()
    }

    pub fn check(&self, n: usize, width: usize) -> Result<()> {
        if self.width() != width || self.amplitudes.iter().any(|a| a.len() != n) {
            return Err(Error::Dimension(format!("boundary must have {width} sites of dimension {n}")));
        }
        for a in &self.amplitudes {
            let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized((norm - 1.0).abs()));
            }
        }
        Ok(())
    }
}

fn compact(map: &[usize]) -> (Vec<usize>, usize) {
    let mut new = vec![usize::MAX; map.len()];
    let mut k = 0;
    for (i, &m) in map.iter().enumerate() {
        if m == i {
            new[i] = k;
            k += 1;
        }
    }
    (new, k)
}
