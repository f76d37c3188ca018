//! Commuting-projector parent Hamiltonians of string-net fixed points and their
//! deformations, built as explicit operators on small patches.
//!
//! Plaquette loops are monomial operators (a basis permutation with coefficients).
//! The diagonal dressing O_ph of a loop is read off from the fixed-point tensor as
//! the product of its entry ratios at the affected vertices, which is the identity
//! for the toric codes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{PatchGeometry, PlaquetteId, VertexId};
use crate::oracle::{contract_single_line, ORACLE_CAP};
use crate::network::SingleLineNet;
use crate::paths::{dipole_path_segment, path_set_frac, path_z22_to_critical, path_z4_to_critical, PathName, PathSpec};
use crate::tensors::{toric_code_single_line, WSingleLine};
use crate::zn::{checked_pow, decode, phase};

/// Dense operators are only formed up to this dimension.
pub const DENSE_CAP: usize = 4096;

/// Vertex rule and loop group of a fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    /// a + b = c + d (mod N); loops shift by X on edges with the plaquette on their
    /// left and X† on edges with it on their right.
    Cyclic,
    /// Two Z_2 layers in the bits of a Z_4 label; one XOR loop per layer.
    Layered,
}

#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub branching: Branching,
    pub w: WSingleLine,
}

impl FixedPoint {
    pub fn toric_code(n: usize) -> Self {
        Self { branching: Branching::Cyclic, w: toric_code_single_line(n) }
    }

    pub fn layered_z2_squared() -> Self {
        Self { branching: Branching::Layered, w: path_z22_to_critical(1.0).expect("g = 1 is in range") }
    }

    pub fn modulus(&self) -> usize {
        self.w.modulus()
    }

    /// Number of independent Z_2 or Z_N vertex constraints.
    fn layers(&self) -> Vec<usize> {
        match self.branching {
            Branching::Cyclic => vec![0],
            Branching::Layered => vec![0, 1],
        }
    }

    /// Diagonal value of A_v (layer `l`) on the vertex labels.
    fn vertex_phase(&self, l: usize, [a, b, c, d]: [usize; 4]) -> Complex64 {
        let n = self.modulus();
        match self.branching {
            Branching::Cyclic => phase(a as i64 + b as i64 - c as i64 - d as i64, n),
            Branching::Layered => phase((((a ^ b ^ c ^ d) >> l) & 1) as i64, 2),
        }
    }

    fn vertex_order(&self) -> usize {
        match self.branching {
            Branching::Cyclic => self.modulus(),
            Branching::Layered => 2,
        }
    }

    fn move_label(&self, l: usize, label: usize, shift: i64) -> usize {
        let n = self.modulus();
        match self.branching {
            Branching::Cyclic => (label as i64 + shift).rem_euclid(n as i64) as usize,
            Branching::Layered if shift.rem_euclid(2) == 1 => label ^ (1 << l),
            Branching::Layered => label,
        }
    }
}

/// op|c⟩ = coeff[c] |target[c]⟩
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub target: Vec<usize>,
    pub coeff: Vec<Complex64>,
}

impl Monomial {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (c, &x) in v.iter().enumerate() {
            if x.norm_sqr() != 0.0 {
                out[self.target[c]] += self.coeff[c] * x;
            }
        }
        out
    }

    /// T·op·T⁻¹ for a diagonal T without zeros.
    pub fn conjugate(&self, t: &[Complex64]) -> Monomial {
        let coeff = self.coeff.iter().enumerate().map(|(c, &k)| k * t[self.target[c]] / t[c]).collect();
        Monomial { target: self.target.clone(), coeff }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.target.len();
        let mut m = DMatrix::zeros(d, d);
        for c in 0..d {
            m[(self.target[c], c)] += self.coeff[c];
        }
        m
    }
}

/// One loop generator B_p of order `order` around a plaquette.
#[derive(Clone, Debug)]
pub struct PlaquetteLoop {
    pub plaquette: PlaquetteId,
    pub layer: usize,
    pub order: usize,
    pub op: Monomial,
    /// Vertices whose constraints enter the projector 𝒫_p.
    pub vertices: Vec<VertexId>,
}

/// All terms of the parent Hamiltonian on one patch.
#[derive(Clone, Debug)]
pub struct ParentTerms {
    pub geometry: PatchGeometry,
    pub modulus: usize,
    pub dim: usize,
    /// Diagonal of each 𝒜_v (one per vertex and layer).
    pub vertex_terms: Vec<(VertexId, Vec<Complex64>)>,
    pub loops: Vec<PlaquetteLoop>,
}

fn vertex_labels(geo: &PatchGeometry, v: VertexId, labels: &[usize]) -> [usize; 4] {
    geo.vertices[v].edges.map(|e| labels[e])
}

/// Builds 𝒜_v = 1 − (1/N)Σ_k A_v^k and the loops B_p = O_ph·(loop) of a fixed point
/// on every interior plaquette of the patch.
pub fn build_parent_hamiltonian_terms(fp: &FixedPoint, geo: &PatchGeometry) -> Result<ParentTerms> {
    let n = fp.modulus();
    let k = geo.num_edges();
    let dim = checked_pow(n, k)?;
    if dim > ORACLE_CAP {
        return Err(Error::CapExceeded { what: "parent Hamiltonian dimension".into(), needed: dim as u128, cap: ORACLE_CAP as u128 });
    }
    let order = fp.vertex_order();
    let mut labels = vec![0usize; k];
    let mut vertex_terms = Vec::new();
    for v in 0..geo.num_vertices() {
        for l in fp.layers() {
            let mut diag = vec![Complex64::new(0.0, 0.0); dim];
            for (idx, x) in diag.iter_mut().enumerate() {
                decode(idx, n, &mut labels);
                let a = fp.vertex_phase(l, vertex_labels(geo, v, &labels));
                let s: Complex64 = (0..order).map(|j| a.powu(j as u32)).sum();
                *x = Complex64::new(1.0, 0.0) - s / order as f64;
            }
            vertex_terms.push((v, diag));
        }
    }
    let mut loops = Vec::new();
    for p in geo.interior_plaquettes() {
        let shifts: Vec<(usize, i64)> = geo
            .edges
            .iter()
            .enumerate()
            .map(|(e, ed)| (e, (ed.left == p) as i64 - (ed.right == p) as i64))
            .filter(|&(_, s)| s != 0)
            .collect();
        let mut vertices: Vec<VertexId> = shifts
            .iter()
            .flat_map(|&(e, _)| [geo.edges[e].source.map(|s| s.0), geo.edges[e].target.map(|t| t.0)])
            .flatten()
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        for l in fp.layers() {
            let mut target = vec![0usize; dim];
            let mut coeff = vec![Complex64::new(1.0, 0.0); dim];
            let mut moved = vec![0usize; k];
            for idx in 0..dim {
                decode(idx, n, &mut labels);
                moved.copy_from_slice(&labels);
                for &(e, s) in &shifts {
                    moved[e] = fp.move_label(l, labels[e], s);
                }
                target[idx] = moved.iter().fold(0, |acc, &x| acc * n + x);
                let mut ratio = Complex64::new(1.0, 0.0);
                for &v in &vertices {
                    let before = fp.w.get_arr(vertex_labels(geo, v, &labels));
                    let after = fp.w.get_arr(vertex_labels(geo, v, &moved));
                    if before.norm_sqr() == 0.0 || after.norm_sqr() == 0.0 {
                        ratio = Complex64::new(1.0, 0.0);
                        break;
                    }
                    ratio *= after / before;
                }
                coeff[idx] = ratio;
            }
            loops.push(PlaquetteLoop { plaquette: p, layer: l, order, op: Monomial { target, coeff }, vertices: vertices.clone() });
        }
    }
    Ok(ParentTerms { geometry: geo.clone(), modulus: n, dim, vertex_terms, loops })
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl ParentTerms {
    /// 𝒫_p: 1 where every vertex around the loop satisfies all its constraints.
    pub fn plaquette_projector(&self, lp: &PlaquetteLoop) -> Vec<f64> {
        let mut proj = vec![1.0; self.dim];
        for (v, diag) in &self.vertex_terms {
            if lp.vertices.contains(v) {
                for (p, x) in proj.iter_mut().zip(diag) {
                    *p *= 1.0 - x.re;
                }
            }
        }
        proj
    }

    /// (1 − (1/N)Σ_k B^k) applied to `v`.
    pub fn apply_loop_term(op: &Monomial, order: usize, v: &[Complex64]) -> Vec<Complex64> {
        let mut acc = v.to_vec();
        let mut cur = v.to_vec();
        for _ in 1..order {
            cur = op.apply(&cur);
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += c;
            }
        }
        v.iter().zip(acc).map(|(x, s)| x - s / order as f64).collect()
    }

    /// Σ_k B^k applied to `v`.
    pub fn apply_loop_sum(op: &Monomial, order: usize, v: &[Complex64]) -> Vec<Complex64> {
        let mut acc = v.to_vec();
        let mut cur = v.to_vec();
        for _ in 1..order {
            cur = op.apply(&cur);
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += c;
            }
        }
        acc
    }

    /// max over terms of ‖H_term ψ‖/‖ψ‖, vertex terms and plaquette terms separately.
    pub fn annihilation_residual(&self, psi: &[Complex64]) -> Result<(f64, f64)> {
        self.check_dim(psi)?;
        let n0 = norm(psi);
        let mut rv: f64 = 0.0;
        for (_, diag) in &self.vertex_terms {
            let out: Vec<Complex64> = psi.iter().zip(diag).map(|(x, d)| x * d).collect();
            rv = rv.max(norm(&out) / n0);
        }
        let mut rp: f64 = 0.0;
        for lp in &self.loops {
            let proj = self.plaquette_projector(lp);
            let projected: Vec<Complex64> = psi.iter().zip(&proj).map(|(x, p)| x * p).collect();
            let out = Self::apply_loop_term(&lp.op, lp.order, &projected);
            rp = rp.max(norm(&out) / n0);
        }
        Ok((rv, rp))
    }

    /// Π_p Σ_k B_p^k |0…0⟩
    pub fn projected_loop_state(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        v[0] = Complex64::new(1.0, 0.0);
        for lp in &self.loops {
            v = Self::apply_loop_sum(&lp.op, lp.order, &v);
        }
        v
    }

    /// Dense 𝒜_v and ℬ_p𝒫_p matrices.
    pub fn dense_terms(&self) -> Result<Vec<DMatrix<Complex64>>> {
        if self.dim > DENSE_CAP {
            return Err(Error::CapExceeded { what: "dense operator dimension".into(), needed: self.dim as u128, cap: DENSE_CAP as u128 });
        }
        let mut out: Vec<DMatrix<Complex64>> = self.vertex_terms.iter().map(|(_, d)| DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))).collect();
        for lp in &self.loops {
            let b = lp.op.to_dense();
            let mut sum = DMatrix::<Complex64>::identity(self.dim, self.dim);
            let mut pow = DMatrix::<Complex64>::identity(self.dim, self.dim);
            for _ in 1..lp.order {
                pow = &b * &pow;
                sum += &pow;
            }
            let term = DMatrix::<Complex64>::identity(self.dim, self.dim) - sum / Complex64::new(lp.order as f64, 0.0);
            let proj = self.plaquette_projector(lp);
            let pm = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(self.dim, proj.iter().map(|&p| Complex64::new(p, 0.0))));
            out.push(term * pm);
        }
        Ok(out)
    }

    /// Largest Frobenius norm of a commutator between two terms (an upper bound on
    /// the operator norm).
    pub fn max_commutator_norm(&self) -> Result<f64> {
        let terms = self.dense_terms()?;
        let mut worst: f64 = 0.0;
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let c = &terms[i] * &terms[j] - &terms[j] * &terms[i];
                worst = worst.max(c.norm());
            }
        }
        Ok(worst)
    }

    fn check_dim(&self, psi: &[Complex64]) -> Result<()> {
        if psi.len() != self.dim {
            return Err(Error::Dimension(format!("state has dimension {}, expected {}", psi.len(), self.dim)));
        }
        Ok(())
    }
}

/// Fixed point whose parent Hamiltonian is deformed along a single-line path at `g`.
pub fn reference_fixed_point(path: &PathSpec, g: f64) -> Result<FixedPoint> {
    Ok(match path.name {
        PathName::TcDs => return Err(Error::Unsupported("the deformed check needs a single-line path".into())),
        PathName::Z22Z4Seg1 => FixedPoint::layered_z2_squared(),
        PathName::Z22Z4Seg2 => FixedPoint { branching: Branching::Cyclic, w: path_z4_to_critical(1.0)? },
        PathName::SetFrac => FixedPoint { branching: Branching::Cyclic, w: path_set_frac(if g < 0.0 { -1.0 } else { 1.0 }, path.modulus)? },
        PathName::DipoleSeg1 | PathName::DipoleSeg2 | PathName::DipoleSeg3 => FixedPoint { branching: Branching::Cyclic, w: dipole_path_segment(1, 1.0)? },
    })
}

/// Per-vertex entry ratios W(g)/W_fix; fails where they do not define an invertible
/// diagonal deformation.
pub fn deformation_ratios(w: &WSingleLine, fixed: &WSingleLine) -> Result<WSingleLine> {
    let n = w.modulus();
    if fixed.modulus() != n {
        return Err(Error::Dimension("tensor moduli differ".into()));
    }
    let mut bad = None;
    let r = WSingleLine::from_fn(n, |a, b, c, d| {
        let (x, y) = (w.get(a, b, c, d), fixed.get(a, b, c, d));
        match (x.norm_sqr() > 0.0, y.norm_sqr() > 0.0) {
            (true, true) => x / y,
            (false, false) => Complex64::new(1.0, 0.0),
            _ => {
                bad.get_or_insert((a, b, c, d));
                Complex64::new(1.0, 0.0)
            }
        }
    });
    match bad {
        Some(cfg) => Err(Error::Unsupported(format!("deformation is not an invertible diagonal: entry {cfg:?} vanishes in only one of the tensors"))),
        None => Ok(r),
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DeformedCheck {
    pub path: PathName,
    pub g: f64,
    pub vertex_residual: f64,
    pub plaquette_residual: f64,
}

impl DeformedCheck {
    pub fn residual(&self) -> f64 {
        self.vertex_residual.max(self.plaquette_residual)
    }
}

/// Verifies that the deformed state T|ψ_fix⟩ is annihilated by every 𝒜_v and by
/// every (ℬ̃_p†ℬ̃_p)𝒫_p with B̃_p = T B_p T⁻¹.
pub fn deformed_hamiltonian_check(path: &PathSpec, g: f64, geo: &PatchGeometry) -> Result<DeformedCheck> {
    let w = path.rule_tensor(g)?;
    if path.name.is_double_line() {
        return Err(Error::Unsupported("the deformed check needs a single-line path".into()));
    }
    let fp = reference_fixed_point(path, g)?;
    let ratios = deformation_ratios(&w, &fp.w)?;
    let terms = build_parent_hamiltonian_terms(&fp, geo)?;
    let psi = contract_single_line(&SingleLineNet::uniform(geo.clone(), w, None)?, ORACLE_CAP)?.amplitudes;
    let n = terms.modulus;
    let mut labels = vec![0; geo.num_edges()];
    let t: Vec<Complex64> = (0..terms.dim)
        .map(|idx| {
            decode(idx, n, &mut labels);
            (0..geo.num_vertices()).map(|v| ratios.get_arr(vertex_labels(geo, v, &labels))).product()
        })
        .collect();
    let deformed = ParentTerms {
        loops: terms
            .loops
            .iter()
            .map(|lp| PlaquetteLoop { op: lp.op.conjugate(&t), ..lp.clone() })
            .collect(),
        ..terms.clone()
    };
    let n0 = norm(&psi);
    let mut rv: f64 = 0.0;
    for (_, diag) in &deformed.vertex_terms {
        let out: Vec<Complex64> = psi.iter().zip(diag).map(|(x, d)| x * d).collect();
        rv = rv.max(norm(&out) / n0);
    }
    let mut rp: f64 = 0.0;
    for lp in &deformed.loops {
        let proj = deformed.plaquette_projector(lp);
        let projected: Vec<Complex64> = psi.iter().zip(&proj).map(|(x, p)| x * p).collect();
        let b = ParentTerms::apply_loop_term(&lp.op, lp.order, &projected);
        let bb = apply_loop_term_adjoint(&lp.op, lp.order, &b);
        rp = rp.max(norm(&bb) / n0);
    }
    Ok(DeformedCheck { path: path.name, g, vertex_residual: rv, plaquette_residual: rp })
}

/// (1 − (1/N)Σ_k B^k)† applied to `v`.
fn apply_loop_term_adjoint(op: &Monomial, order: usize, v: &[Complex64]) -> Vec<Complex64> {
    // B†|target[c]⟩ = conj(coeff[c]) |c⟩
    let mut inv_target = vec![0usize; op.target.len()];
    for (c, &t) in op.target.iter().enumerate() {
        inv_target[t] = c;
    }
    let adj = Monomial {
        target: inv_target.clone(),
        coeff: inv_target.iter().map(|&c| op.coeff[c].conj()).collect(),
    };
    ParentTerms::apply_loop_term(&adj, order, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::DoubleLineNet;
    use crate::oracle::contract_double_line;
    use crate::tensors::toric_code_double_line;

    fn torus() -> PatchGeometry {
        PatchGeometry::torus(4, 2).unwrap()
    }

    #[test]
    fn toric_code_terms_commute_and_annihilate() {
        let terms = build_parent_hamiltonian_terms(&FixedPoint::toric_code(2), &torus()).unwrap();
        assert_eq!(terms.vertex_terms.len(), 4);
        assert_eq!(terms.loops.len(), 4);
        assert!(terms.max_commutator_norm().unwrap() < 1e-12);
        let psi = contract_double_line(&DoubleLineNet::uniform(torus(), toric_code_double_line(2), None).unwrap(), ORACLE_CAP).unwrap();
        let (rv, rp) = terms.annihilation_residual(&psi.amplitudes).unwrap();
        assert!(rv < 1e-12 && rp < 1e-12, "{rv} {rp}");
        assert!(psi.fidelity(&terms.projected_loop_state()) > 1.0 - 1e-12);
    }

    #[test]
    fn terms_are_projectors() {
        let terms = build_parent_hamiltonian_terms(&FixedPoint::toric_code(2), &torus()).unwrap();
        for t in terms.dense_terms().unwrap() {
            assert!((&t * &t - &t).norm() < 1e-12);
        }
    }

    #[test]
    fn single_line_state_includes_all_winding_sectors() {
        let terms = build_parent_hamiltonian_terms(&FixedPoint::toric_code(2), &torus()).unwrap();
        let sl = contract_single_line(&SingleLineNet::uniform(torus(), toric_code_single_line(2), None).unwrap(), ORACLE_CAP).unwrap();
        let (rv, rp) = terms.annihilation_residual(&sl.amplitudes).unwrap();
        assert!(rv < 1e-12 && rp < 1e-12);
        assert!((sl.fidelity(&terms.projected_loop_state()) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn z4_toric_code_on_torus() {
        let terms = build_parent_hamiltonian_terms(&FixedPoint::toric_code(4), &torus()).unwrap();
        let psi = contract_double_line(&DoubleLineNet::uniform(torus(), toric_code_double_line(4), None).unwrap(), ORACLE_CAP).unwrap();
        let (rv, rp) = terms.annihilation_residual(&psi.amplitudes).unwrap();
        assert!(rv < 1e-12 && rp < 1e-12);
        assert!(psi.fidelity(&terms.projected_loop_state()) > 1.0 - 1e-12);
    }

    #[test]
    fn broken_state_is_not_annihilated() {
        let terms = build_parent_hamiltonian_terms(&FixedPoint::toric_code(2), &torus()).unwrap();
        let mut psi = vec![Complex64::new(0.0, 0.0); terms.dim];
        psi[0] = Complex64::new(1.0, 0.0);
        let (rv, rp) = terms.annihilation_residual(&psi).unwrap();
        assert!(rv < 1e-12);
        assert!(rp > 0.1);
        psi[1] = Complex64::new(1.0, 0.0);
        assert!(terms.annihilation_residual(&psi).unwrap().0 > 0.1);
    }

    #[test]
    fn deformed_checks_on_single_line_paths() {
        for (name, gs) in [
            (PathName::Z22Z4Seg1, vec![0.25, 0.5, 0.75]),
            (PathName::Z22Z4Seg2, vec![0.25, 0.5, 0.75]),
            (PathName::SetFrac, vec![-0.5, 0.5, 1.0]),
        ] {
            let spec = PathSpec::new(name, None).unwrap();
            for g in gs {
                let r = deformed_hamiltonian_check(&spec, g, &torus()).unwrap();
                assert!(r.residual() < 1e-10, "{name} {g}: {r:?}");
            }
        }
    }

    #[test]
    fn deformed_check_on_nine_level_patch() {
        let geo = PatchGeometry::open(2, 3).unwrap();
        assert_eq!(geo.interior_plaquettes().len(), 1);
        let spec = PathSpec::new(PathName::DipoleSeg1, None).unwrap();
        let r = deformed_hamiltonian_check(&spec, 0.5, &geo).unwrap();
        assert!(r.residual() < 1e-10, "{r:?}");
    }

    #[test]
    fn deformed_check_detects_wrong_reference() {
        // Deforming the layered fixed point with cyclic loops must fail.
        let spec = PathSpec::new(PathName::Z22Z4Seg1, None).unwrap();
        let fp = FixedPoint { branching: Branching::Cyclic, w: path_z22_to_critical(1.0).unwrap() };
        let terms = build_parent_hamiltonian_terms(&fp, &torus()).unwrap();
        let psi = contract_single_line(&SingleLineNet::uniform(torus(), spec.rule_tensor(0.5).unwrap(), None).unwrap(), ORACLE_CAP).unwrap();
        assert!(terms.annihilation_residual(&psi.amplitudes).unwrap().1 > 1e-3);
    }

    #[test]
    fn underivable_deformations_are_rejected() {
        let crit = PathSpec::new(PathName::Z22Z4Seg2, None).unwrap();
        assert!(matches!(deformed_hamiltonian_check(&crit, 0.0, &torus()), Err(Error::Unsupported(_))));
        let seg2 = PathSpec::new(PathName::DipoleSeg2, None).unwrap();
        let geo = PatchGeometry::open(2, 3).unwrap();
        assert!(matches!(deformed_hamiltonian_check(&seg2, 0.5, &geo), Err(Error::Unsupported(_))));
    }
}
