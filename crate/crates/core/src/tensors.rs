//! Single-line and double-line tensors, fixed points, and exact validators.
//!
//! Index conventions, used everywhere in the crate:
//!
//! * `WSingleLine`: entry `W[(a,b),(c,d)]` with `a` the left input, `b` the right
//!   input, `c` the left output and `d` the right output of a vertex; flat index
//!   `((a*N + b)*N + c)*N + d`.
//! * `ADoubleLine`: entry `A[a][c][d'][b']` over the four plaquette labels around a
//!   vertex, in the order left, lower-middle, right, upper-middle; flat index
//!   `((a*N + c)*N + d')*N + b'`. The physical domain walls are
//!   `σ = a − c`, `ρ = c − d'` (inputs) and `μ = a − b'`, `ν = b' − d'` (outputs).

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::phase;
use rand::Rng;

/// Threshold below which a symmetry or isometry residual counts as holding.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct WSingleLine {
    n: usize,
    entries: Vec<Complex64>,
}

impl WSingleLine {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        assert!(n >= 2, "modulus must be at least 2");
        let mut entries = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        entries.push(f(a, b, c, d));
                    }
                }
            }
        }
        Self { n, entries }
    }

    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n < 2 || entries.len() != n.pow(4) {
            return Err(Error::Dimension(format!("expected {} entries for N = {n}", n.pow(4))));
        }
        Ok(Self { n, entries })
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        let n = self.n;
        self.entries[((a * n + b) * n + c) * n + d]
    }

    /// Entry by (row, column) with row = a·N + b and column = c·N + d.
    #[inline]
    pub fn get_arr(&self, [a, b, c, d]: [usize; 4]) -> Complex64 {
        self.get(a, b, c, d)
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n * self.n + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.entries.iter().zip(&other.entries).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// max over rows of |Σ_cd |W|² − 1|
    pub fn normalization_residual(&self) -> f64 {
        let nn = self.n * self.n;
        self.entries
            .chunks(nn)
            .map(|row| (row.iter().map(|w| w.norm_sqr()).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ADoubleLine {
    n: usize,
    entries: Vec<Complex64>,
}

impl ADoubleLine {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        assert!(n >= 2, "modulus must be at least 2");
        let mut entries = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for c in 0..n {
                for dp in 0..n {
                    for bp in 0..n {
                        entries.push(f(a, c, dp, bp));
                    }
                }
            }
        }
        Self { n, entries }
    }

    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n < 2 || entries.len() != n.pow(4) {
            return Err(Error::Dimension(format!("expected {} entries for N = {n}", n.pow(4))));
        }
        Ok(Self { n, entries })
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    /// `A[a][c][d'][b']`, labels taken mod N.
    #[inline]
    pub fn get(&self, a: usize, c: usize, dp: usize, bp: usize) -> Complex64 {
        let n = self.n;
        self.entries[(((a % n) * n + c % n) * n + dp % n) * n + bp % n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.entries.iter().zip(&other.entries).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// max over (a, c, d') of |Σ_b' |A|² − 1|
    pub fn normalization_residual(&self) -> f64 {
        self.entries
            .chunks(self.n)
            .map(|row| (row.iter().map(|w| w.norm_sqr()).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Either tensor family.
#[derive(Clone, Debug, PartialEq)]
pub enum Tensor {
    Single(WSingleLine),
    Double(ADoubleLine),
}

impl Tensor {
    pub fn modulus(&self) -> usize {
        match self {
            Tensor::Single(w) => w.modulus(),
            Tensor::Double(a) => a.modulus(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    Isometry,
    /// Z on inputs, Z† on outputs.
    ZLoop,
    /// The two Z_2 layer loops of Z_4 ≅ Z_2² labels j = 2j₁ + j₂.
    ZLoopLayered,
    XLoopTrivial,
    XLoopCz,
    FracTrivial,
    FracNontrivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirtualSymmetryReport {
    pub symmetry: SymmetryKind,
    pub holds: bool,
    pub max_residual: f64,
}

impl VirtualSymmetryReport {
    fn new(symmetry: SymmetryKind, max_residual: f64) -> Self {
        Self { symmetry, holds: max_residual < SYMMETRY_TOL, max_residual }
    }
}

pub fn toric_code_single_line(n: usize) -> WSingleLine {
    let v = 1.0 / (n as f64).sqrt();
    WSingleLine::from_fn(n, |a, b, c, d| {
        if (a + b + 2 * n - c - d) % n == 0 {
            Complex64::new(v, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn toric_code_double_line(n: usize) -> ADoubleLine {
    let v = 1.0 / (n as f64).sqrt();
    ADoubleLine::from_fn(n, |_, _, _, _| Complex64::new(v, 0.0))
}

pub fn double_semion_double_line() -> ADoubleLine {
    let v = std::f64::consts::FRAC_1_SQRT_2;
    ADoubleLine::from_fn(2, |a, c, dp, bp| match (a, c, dp, bp) {
        (0, 0, 1, 1) | (0, 1, 1, 0) => Complex64::new(-v, 0.0),
        _ => Complex64::new(v, 0.0),
    })
}

/// Sign pattern of the Z_N fixed point with non-trivial fractionalization (even N).
pub fn frac_sign(n: usize, a: usize, b: usize, c: usize, d: usize) -> f64 {
    assert!(n % 2 == 0, "frac sign needs even N");
    if a + n * b > n * n / 2 {
        return 1.0;
    }
    let flip = if n % 4 == 0 {
        [a, b, c, d].iter().filter(|&&j| j % 2 == 1 && 2 * j > n).count() % 2 == 1
    } else {
        even_odd_split(a, b, c, d)
    };
    if flip {
        -1.0
    } else {
        1.0
    }
}

/// a, b both even and c, d both odd, or vice versa.
pub(crate) fn even_odd_split(a: usize, b: usize, c: usize, d: usize) -> bool {
    let ev = |j: usize| j % 2 == 0;
    (ev(a) && ev(b) && !ev(c) && !ev(d)) || (!ev(a) && !ev(b) && ev(c) && ev(d))
}

/// W^{Z_N,f}: the branching fixed point dressed with [`frac_sign`].
pub fn frac_nontrivial_fixed_point(n: usize) -> Result<WSingleLine> {
    if n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("N = {n} must be even")));
    }
    let v = 1.0 / (n as f64).sqrt();
    Ok(WSingleLine::from_fn(n, |a, b, c, d| {
        if (a + b + 2 * n - c - d) % n == 0 {
            Complex64::new(v * frac_sign(n, a, b, c, d), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Random row-normalized tensor: each entry is nonzero with probability `density`
/// (at least one per row) and has a uniformly random phase.
pub fn random_single_line<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> WSingleLine {
    let nn = n * n;
    let mut entries = vec![Complex64::new(0.0, 0.0); nn * nn];
    for row in entries.chunks_mut(nn) {
        let forced = rng.gen_range(0..nn);
        for (j, x) in row.iter_mut().enumerate() {
            if j == forced || rng.gen::<f64>() < density {
                *x = Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            }
        }
        let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        row.iter_mut().for_each(|z| *z /= norm);
    }
    WSingleLine { n, entries }
}

/// Diagonal of the virtual operator Q: −1 on odd j > N/2 for N = 4k, i on odd j for N = 4k + 2.
pub fn frac_q(n: usize, j: usize) -> Complex64 {
    if n % 4 == 0 {
        if j % 2 == 1 && 2 * j > n {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    } else if j % 2 == 1 {
        Complex64::new(0.0, 1.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Contracts T with T* as written for isometric tensors and reports the largest
/// deviation from the identity (times δ_bc for double-line tensors).
pub fn check_isometry(t: &Tensor) -> VirtualSymmetryReport {
    let r = match t {
        Tensor::Single(w) => isometry_single(w),
        Tensor::Double(a) => isometry_double(a),
    };
    VirtualSymmetryReport::new(SymmetryKind::Isometry, r)
}

fn isometry_single(w: &WSingleLine) -> f64 {
    // T^{σρ}_{abcd} = δ_{σa} δ_{ρb} W_{(ab)(cd)}; contract σ, ρ, c, d.
    let n = w.modulus();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for a2 in 0..n {
                for b2 in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..n {
                        for r in 0..n {
                            if s != a || r != b || s != a2 || r != b2 {
                                continue;
                            }
                            for c in 0..n {
                                for d in 0..n {
                                    acc += w.get(a, b, c, d) * w.get(a2, b2, c, d).conj();
                                }
                            }
                        }
                    }
                    let target = if a == a2 && b == b2 { 1.0 } else { 0.0 };
                    worst = worst.max((acc - target).norm());
                }
            }
        }
    }
    worst
}

fn isometry_double(t: &ADoubleLine) -> f64 {
    // Virtual legs carry pairs: left-in (a,b), top-in (c,d), right-out (a',b'),
    // bottom-out (c',d'). Closed-loop structure: a = a', b = c, c' = b', d = d'.
    // Physical legs σ = a − b, ρ = c − d. The entry is A[a][c][d'][b'].
    let n = t.modulus();
    let tensor = |a: usize, b: usize, c: usize, d: usize, a1: usize, b1: usize, c1: usize, d1: usize| {
        if a == a1 && b == c && c1 == b1 && d == d1 {
            t.get(a, c, d1, b1)
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut worst: f64 = 0.0;
    let n4 = n.pow(4);
    let mut idx = [0usize; 4];
    let mut idx2 = [0usize; 4];
    for u in 0..n4 {
        crate::zn::decode(u, n, &mut idx);
        let [a, b, c, d] = idx;
        for v in 0..n4 {
            crate::zn::decode(v, n, &mut idx2);
            let [a2, b2, c2, d2] = idx2;
            // Physical legs are summed, so σ and ρ must agree on both sides.
            let same_phys = (a + n - b) % n == (a2 + n - b2) % n && (c + n - d) % n == (c2 + n - d2) % n;
            let mut acc = Complex64::new(0.0, 0.0);
            for a1 in 0..n {
                for b1 in 0..n {
                    for c1 in 0..n {
                        for d1 in 0..n {
                            let x = tensor(a, b, c, d, a1, b1, c1, d1);
                            if x.norm_sqr() == 0.0 {
                                continue;
                            }
                            if !same_phys {
                                continue;
                            }
                            acc += x * tensor(a2, b2, c2, d2, a1, b1, c1, d1).conj();
                        }
                    }
                }
            }
            let target = if idx == idx2 && b == c { 1.0 } else { 0.0 };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

/// Evaluates the requested virtual-symmetry identity entrywise.
pub fn check_virtual_symmetry(t: &Tensor, kind: SymmetryKind) -> Result<VirtualSymmetryReport> {
    let incompatible = || Err(Error::IncompatibleSymmetry(format!("{kind:?}")));
    let r = match (t, kind) {
        (_, SymmetryKind::Isometry) => return Ok(check_isometry(t)),
        (Tensor::Single(w), SymmetryKind::ZLoop) => {
            let n = w.modulus();
            max_over_single(w, |a, b, c, d, x| (phase((a + b) as i64 - (c + d) as i64, n) * x - x).norm())
        }
        (Tensor::Single(w), SymmetryKind::ZLoopLayered) => {
            if w.modulus() != 4 {
                return incompatible();
            }
            max_over_single(w, |a, b, c, d, x| {
                let low = (a + b + c + d) % 2;
                let high = (a / 2 + b / 2 + c / 2 + d / 2) % 2;
                let s = |p: usize| if p == 0 { 1.0 } else { -1.0 };
                (x * s(low) - x).norm().max((x * s(high) - x).norm())
            })
        }
        (Tensor::Single(w), SymmetryKind::FracTrivial | SymmetryKind::FracNontrivial) => {
            let n = w.modulus();
            if n % 2 != 0 {
                return incompatible();
            }
            let h = n / 2;
            let nontrivial = kind == SymmetryKind::FracNontrivial;
            max_over_single(w, |a, b, c, d, x| {
                let shifted = w.get((a + h) % n, (b + h) % n, (c + h) % n, (d + h) % n).conj();
                let q = if nontrivial {
                    frac_q(n, a) * frac_q(n, b) * frac_q(n, c).conj() * frac_q(n, d).conj()
                } else {
                    Complex64::new(1.0, 0.0)
                };
                (shifted * q - x).norm()
            })
        }
        (Tensor::Double(t), SymmetryKind::XLoopTrivial) => {
            max_over_double(t, |a, c, dp, bp, x| (t.get(a + 1, c + 1, dp + 1, bp + 1) - x).norm())
        }
        (Tensor::Double(t), SymmetryKind::XLoopCz) => {
            if t.modulus() != 2 {
                return incompatible();
            }
            max_over_double(t, |a, c, dp, bp, x| {
                let ring = (a * c + c * dp + dp * bp + bp * a) % 2;
                let s = if ring == 0 { 1.0 } else { -1.0 };
                (t.get(a + 1, c + 1, dp + 1, bp + 1) * s - x).norm()
            })
        }
        _ => return incompatible(),
    };
    Ok(VirtualSymmetryReport::new(kind, r))
}

fn max_over_single(w: &WSingleLine, f: impl Fn(usize, usize, usize, usize, Complex64) -> f64) -> f64 {
    let n = w.modulus();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    worst = worst.max(f(a, b, c, d, w.get(a, b, c, d)));
                }
            }
        }
    }
    worst
}

fn max_over_double(t: &ADoubleLine, f: impl Fn(usize, usize, usize, usize, Complex64) -> f64) -> f64 {
    let n = t.modulus();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for c in 0..n {
            for dp in 0..n {
                for bp in 0..n {
                    worst = worst.max(f(a, c, dp, bp, t.get(a, c, dp, bp)));
                }
            }
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FracClass {
    Trivial,
    Nontrivial,
    Both,
    Neither,
}

pub fn classify_symmetry_action(w: &WSingleLine) -> Result<FracClass> {
    if w.modulus() % 2 != 0 {
        return Err(Error::InvalidArgument(format!("N = {} must be even", w.modulus())));
    }
    let t = Tensor::Single(w.clone());
    let triv = check_virtual_symmetry(&t, SymmetryKind::FracTrivial)?.holds;
    let non = check_virtual_symmetry(&t, SymmetryKind::FracNontrivial)?.holds;
    Ok(match (triv, non) {
        (true, true) => FracClass::Both,
        (true, false) => FracClass::Trivial,
        (false, true) => FracClass::Nontrivial,
        (false, false) => FracClass::Neither,
    })
}

#[derive(Serialize, Deserialize)]
struct TensorFile {
    kind: String,
    #[serde(rename = "N")]
    n: usize,
    entries: Vec<[f64; 2]>,
}

pub fn tensor_to_json(t: &Tensor) -> String {
    let (kind, n, entries) = match t {
        Tensor::Single(w) => ("single-line", w.modulus(), w.entries()),
        Tensor::Double(a) => ("double-line", a.modulus(), a.entries()),
    };
    let file = TensorFile { kind: kind.into(), n, entries: entries.iter().map(|z| [z.re, z.im]).collect() };
    serde_json::to_string_pretty(&file).expect("tensor serialization cannot fail")
}

pub fn tensor_from_json(s: &str) -> Result<Tensor> {
    let f: TensorFile = serde_json::from_str(s)?;
    let entries = f.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    match f.kind.as_str() {
        "single-line" => Ok(Tensor::Single(WSingleLine::from_entries(f.n, entries)?)),
        "double-line" => Ok(Tensor::Double(ADoubleLine::from_entries(f.n, entries)?)),
        other => Err(Error::Schema(format!("unknown tensor kind {other:?}"))),
    }
}

pub fn save_tensor(t: &Tensor, path: &Path) -> Result<()> {
    std::fs::write(path, tensor_to_json(t))?;
    Ok(())
}

pub fn load_tensor(path: &Path) -> Result<Tensor> {
    tensor_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_code_entries() {
        let w = toric_code_single_line(2);
        let v = std::f64::consts::FRAC_1_SQRT_2;
        assert!((w.get(0, 0, 0, 0).re - v).abs() < 1e-15);
        assert!((w.get(0, 0, 1, 1).re - v).abs() < 1e-15);
        assert_eq!(w.get(0, 0, 0, 1).re, 0.0);
        let nz: Vec<_> = (0..2).flat_map(|c| (0..2).map(move |d| (c, d))).filter(|&(c, d)| w.get(0, 1, c, d).norm() > 0.0).collect();
        assert_eq!(nz, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn toric_code_support_count_is_n_cubed() {
        for n in 2..7 {
            let w = toric_code_single_line(n);
            assert_eq!(w.entries().iter().filter(|z| z.norm() > 0.0).count(), n.pow(3));
        }
    }

    #[test]
    fn fixed_points_are_isometric() {
        for n in 2..6 {
            assert!(check_isometry(&Tensor::Single(toric_code_single_line(n))).max_residual < 1e-14);
            assert!(check_isometry(&Tensor::Double(toric_code_double_line(n))).max_residual < 1e-14);
        }
        assert!(check_isometry(&Tensor::Double(double_semion_double_line())).max_residual < 1e-14);
        for n in [2, 4, 6, 8] {
            assert!(check_isometry(&Tensor::Single(frac_nontrivial_fixed_point(n).unwrap())).max_residual < 1e-14);
        }
    }

    #[test]
    fn broken_normalization_is_detected() {
        let mut w = toric_code_single_line(3);
        w.entries_mut()[0] *= 2.0;
        let r = check_isometry(&Tensor::Single(w));
        assert!(!r.holds);
    }

    #[test]
    fn isometry_contraction_matches_row_norms() {
        let mut w = toric_code_single_line(3);
        w.entries_mut()[5] = Complex64::new(0.3, 0.1);
        let lit = check_isometry(&Tensor::Single(w.clone())).max_residual;
        // Literal contraction and row normalization agree on the diagonal.
        assert!((lit - w.normalization_residual()).abs() < 1e-14);
    }

    #[test]
    fn double_line_isometry_sees_broken_rows() {
        let mut a = toric_code_double_line(2);
        a.entries[3] = Complex64::new(0.9, 0.0);
        assert!(!check_isometry(&Tensor::Double(a)).holds);
    }

    #[test]
    fn ds_and_tc_differ_only_in_sign() {
        let tc = toric_code_double_line(2);
        let ds = double_semion_double_line();
        for (x, y) in tc.entries().iter().zip(ds.entries()) {
            assert!((x.norm() - y.norm()).abs() < 1e-15);
        }
        assert!((ds.get(0, 0, 1, 1).re + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(ds.get(1, 0, 0, 1).re, std::f64::consts::FRAC_1_SQRT_2);
    }

    #[test]
    fn x_loop_checks() {
        let tc = Tensor::Double(toric_code_double_line(2));
        let ds = Tensor::Double(double_semion_double_line());
        assert!(check_virtual_symmetry(&tc, SymmetryKind::XLoopTrivial).unwrap().holds);
        assert!(!check_virtual_symmetry(&tc, SymmetryKind::XLoopCz).unwrap().holds);
        assert!(!check_virtual_symmetry(&ds, SymmetryKind::XLoopTrivial).unwrap().holds);
        assert!(check_virtual_symmetry(&ds, SymmetryKind::XLoopCz).unwrap().holds);
    }

    #[test]
    fn frac_checks_on_fixed_points() {
        for n in [2, 4, 6, 8, 10, 12] {
            let triv = toric_code_single_line(n);
            let non = frac_nontrivial_fixed_point(n).unwrap();
            assert_eq!(classify_symmetry_action(&triv).unwrap(), FracClass::Trivial, "N = {n}");
            assert_eq!(classify_symmetry_action(&non).unwrap(), FracClass::Nontrivial, "N = {n}");
        }
    }

    #[test]
    fn q_for_n4() {
        let q: Vec<f64> = (0..4).map(|j| frac_q(4, j).re).collect();
        assert_eq!(q, vec![1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn z_loop() {
        let t = Tensor::Single(toric_code_single_line(4));
        assert!(check_virtual_symmetry(&t, SymmetryKind::ZLoop).unwrap().holds);
        let mut w = toric_code_single_line(4);
        w.entries_mut()[1] = Complex64::new(0.1, 0.0);
        assert!(!check_virtual_symmetry(&Tensor::Single(w), SymmetryKind::ZLoop).unwrap().holds);
    }

    #[test]
    fn incompatible_pairs() {
        let s = Tensor::Single(toric_code_single_line(3));
        let d = Tensor::Double(toric_code_double_line(3));
        assert!(check_virtual_symmetry(&s, SymmetryKind::XLoopTrivial).is_err());
        assert!(check_virtual_symmetry(&s, SymmetryKind::FracTrivial).is_err());
        assert!(check_virtual_symmetry(&d, SymmetryKind::ZLoop).is_err());
        assert!(check_virtual_symmetry(&d, SymmetryKind::XLoopCz).is_err());
        assert!(classify_symmetry_action(&toric_code_single_line(3)).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let w = frac_nontrivial_fixed_point(4).unwrap();
        let mut w2 = w.clone();
        w2.entries_mut()[7] = Complex64::new(0.123456789012345, -0.987654321);
        for t in [Tensor::Single(w2), Tensor::Double(double_semion_double_line())] {
            let back = tensor_from_json(&tensor_to_json(&t)).unwrap();
            assert_eq!(back, t);
        }
        assert!(tensor_from_json(r#"{"kind":"triple","N":2,"entries":[]}"#).is_err());
    }
}
