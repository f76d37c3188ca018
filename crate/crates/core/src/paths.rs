//! Parametrized tensor families connecting the fixed points, and the quantities
//! their critical points conserve.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensors::{even_odd_split, frac_sign, ADoubleLine, SymmetryKind, Tensor, WSingleLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathName {
    #[serde(rename = "tc-ds")]
    TcDs,
    #[serde(rename = "z22-z4-seg1")]
    Z22Z4Seg1,
    #[serde(rename = "z22-z4-seg2")]
    Z22Z4Seg2,
    #[serde(rename = "set-frac")]
    SetFrac,
    #[serde(rename = "dipole-seg1")]
    DipoleSeg1,
    #[serde(rename = "dipole-seg2")]
    DipoleSeg2,
    #[serde(rename = "dipole-seg3")]
    DipoleSeg3,
}

impl PathName {
    pub const ALL: [PathName; 7] = [
        PathName::TcDs,
        PathName::Z22Z4Seg1,
        PathName::Z22Z4Seg2,
        PathName::SetFrac,
        PathName::DipoleSeg1,
        PathName::DipoleSeg2,
        PathName::DipoleSeg3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PathName::TcDs => "tc-ds",
            PathName::Z22Z4Seg1 => "z22-z4-seg1",
            PathName::Z22Z4Seg2 => "z22-z4-seg2",
            PathName::SetFrac => "set-frac",
            PathName::DipoleSeg1 => "dipole-seg1",
            PathName::DipoleSeg2 => "dipole-seg2",
            PathName::DipoleSeg3 => "dipole-seg3",
        }
    }

    pub fn range(self) -> (f64, f64) {
        match self {
            PathName::TcDs | PathName::SetFrac => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Modulus used when the caller does not choose one (only set-frac accepts others).
    pub fn default_modulus(self) -> usize {
        match self {
            PathName::TcDs => 2,
            PathName::Z22Z4Seg1 | PathName::Z22Z4Seg2 | PathName::SetFrac => 4,
            _ => 9,
        }
    }

    pub fn is_double_line(self) -> bool {
        self == PathName::TcDs
    }

    /// Parameter value at which the segment's automaton acquires a conservation law.
    pub fn critical_point(self) -> Option<f64> {
        match self {
            PathName::TcDs | PathName::Z22Z4Seg1 | PathName::Z22Z4Seg2 | PathName::SetFrac | PathName::DipoleSeg1 => Some(0.0),
            PathName::DipoleSeg2 | PathName::DipoleSeg3 => None,
        }
    }
}

impl fmt::Display for PathName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PathName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PathName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown path {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub name: PathName,
    pub modulus: usize,
    pub range: (f64, f64),
}

impl PathSpec {
    pub fn new(name: PathName, modulus: Option<usize>) -> Result<Self> {
        let modulus = modulus.unwrap_or(name.default_modulus());
        let ok = match name {
            PathName::SetFrac => modulus % 2 == 0 && modulus >= 2,
            _ => modulus == name.default_modulus(),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("path {name} does not support N = {modulus}")));
        }
        Ok(Self { name, modulus, range: name.range() })
    }

    pub fn evaluate(&self, g: f64) -> Result<Tensor> {
        check_range(g, self.range)?;
        Ok(match self.name {
            PathName::TcDs => Tensor::Double(path_tc_ds(g)?),
            PathName::Z22Z4Seg1 => Tensor::Single(path_z22_to_critical(g)?),
            PathName::Z22Z4Seg2 => Tensor::Single(path_z4_to_critical(g)?),
            PathName::SetFrac => Tensor::Single(path_set_frac(g, self.modulus)?),
            PathName::DipoleSeg1 => Tensor::Single(dipole_path_segment(1, g)?),
            PathName::DipoleSeg2 => Tensor::Single(dipole_path_segment(2, g)?),
            PathName::DipoleSeg3 => Tensor::Single(dipole_path_segment(3, g)?),
        })
    }

    /// The single-line tensor whose |W|² is the automaton rule; double-line paths
    /// are reduced to domain-wall variables first.
    pub fn rule_tensor(&self, g: f64) -> Result<WSingleLine> {
        match self.evaluate(g)? {
            Tensor::Single(w) => Ok(w),
            Tensor::Double(a) => crate::opcompile::reduce_double_to_single(&a),
        }
    }

    /// Virtual symmetries the family preserves at parameter `g`.
    pub fn declared_symmetries(&self, g: f64) -> Vec<SymmetryKind> {
        let mut v = Vec::new();
        match self.name {
            PathName::TcDs => {
                if g >= 0.0 {
                    v.push(SymmetryKind::XLoopTrivial);
                }
                if g <= 0.0 {
                    v.push(SymmetryKind::XLoopCz);
                }
            }
            PathName::Z22Z4Seg1 => v.push(SymmetryKind::ZLoopLayered),
            PathName::Z22Z4Seg2 | PathName::DipoleSeg1 => v.push(SymmetryKind::ZLoop),
            PathName::SetFrac => {
                v.push(SymmetryKind::ZLoop);
                if g >= 0.0 {
                    v.push(SymmetryKind::FracTrivial);
                }
                if g <= 0.0 {
                    v.push(SymmetryKind::FracNontrivial);
                }
            }
            PathName::DipoleSeg2 | PathName::DipoleSeg3 => {}
        }
        v
    }

    /// Default scan grid: `points` uniform values plus a geometric refinement
    /// toward the critical point when it lies inside the range.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        let (lo, hi) = self.range;
        let mut g: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64).collect();
        if let Some(c) = self.name.critical_point() {
            for k in 1..=6 {
                let d = 10f64.powi(-k - 1);
                for x in [c - d, c + d] {
                    if x >= lo && x <= hi {
                        g.push(x);
                    }
                }
            }
        }
        g.sort_by(|a, b| a.partial_cmp(b).unwrap());
        g.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        g
    }
}

fn check_range(g: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if !(g >= lo && g <= hi) {
        return Err(Error::ParameterRange { g, lo, hi });
    }
    Ok(())
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sign(g: f64) -> f64 {
    if g < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Toric code (g = 1) to double semion (g = −1).
pub fn path_tc_ds(g: f64) -> Result<ADoubleLine> {
    check_range(g, (-1.0, 1.0))?;
    let ga = g.abs();
    let big = 1.0 / (1.0 + ga).sqrt();
    let small = (ga / (1.0 + ga)).sqrt();
    Ok(ADoubleLine::from_fn(2, |a, cc, dp, bp| match (a, cc, dp, bp) {
        (0, 0, 1, 0) | (0, 1, 1, 1) | (1, 1, 0, 1) | (1, 0, 0, 0) => c(big),
        (0, 0, 1, 1) | (0, 1, 1, 0) => c(sign(g) * small),
        (1, 1, 0, 0) | (1, 0, 0, 1) => c(small),
        _ => c(std::f64::consts::FRAC_1_SQRT_2),
    }))
}

/// High-bit parity of labels in Z_4 ≅ Z_2².
fn c1(a: usize, b: usize, cc: usize, d: usize) -> usize {
    [a, b, cc, d].iter().map(|j| (j - j % 2) / 2).sum::<usize>() % 2
}

fn c2(a: usize, b: usize, cc: usize, d: usize) -> usize {
    (a + b + cc + d) % 2
}

fn c3(a: usize, b: usize, cc: usize, d: usize) -> usize {
    (a + b + 8 - cc - d) % 4
}

/// Two decoupled Z_2 toric codes (g = 1) to the critical point (g = 0).
pub fn path_z22_to_critical(g: f64) -> Result<WSingleLine> {
    check_range(g, (0.0, 1.0))?;
    let big = 1.0 / (2.0 + 2.0 * g).sqrt();
    let small = (g / (2.0 + 2.0 * g)).sqrt();
    Ok(WSingleLine::from_fn(4, |a, b, cc, d| {
        let layered = c1(a, b, cc, d) == 0 && c2(a, b, cc, d) == 0;
        if !layered {
            return c(0.0);
        }
        if c3(a, b, cc, d) != 0 {
            return c(small);
        }
        let (a1, b1) = ((a + 1) % 4, (b + 1) % 4);
        // The shifted pair (C1, C2) either vanishes (first case) or not (third case).
        if c1(a1, b1, cc, d) == 0 && c2(a1, b1, cc, d) == 0 {
            c(big)
        } else {
            c(0.5)
        }
    }))
}

/// Z_4 toric code (g = 1) to the same critical point (g = 0).
pub fn path_z4_to_critical(g: f64) -> Result<WSingleLine> {
    check_range(g, (0.0, 1.0))?;
    let big = 1.0 / (2.0 + 2.0 * g).sqrt();
    let small = (g / (2.0 + 2.0 * g)).sqrt();
    Ok(WSingleLine::from_fn(4, |a, b, cc, d| {
        if c3(a, b, cc, d) != 0 {
            return c(0.0);
        }
        if !(c1(a, b, cc, d) == 0 && c2(a, b, cc, d) == 0) {
            return c(small);
        }
        let (a1, b1) = ((a + 1) % 4, (b + 3) % 4);
        if c1(a1, b1, cc, d) == 0 && c2(a1, b1, cc, d) == 0 {
            c(0.5)
        } else {
            c(big)
        }
    }))
}

/// Z_N toric code with trivial (g = 1) to non-trivial (g = −1) fractionalization.
pub fn path_set_frac(g: f64, n: usize) -> Result<WSingleLine> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::InvalidArgument(format!("N = {n} must be even")));
    }
    check_range(g, (-1.0, 1.0))?;
    let ga = g.abs();
    let nf = n as f64;
    let special = (2.0 * ga).sqrt() / ((1.0 + ga).sqrt() * nf.sqrt());
    let regular = 2f64.sqrt() / ((1.0 + ga).sqrt() * nf.sqrt());
    let prefactor = |a, b, cc, d| if g >= 0.0 { 1.0 } else { frac_sign(n, a, b, cc, d) };
    Ok(WSingleLine::from_fn(n, |a, b, cc, d| {
        if (a + b + 2 * n - cc - d) % n != 0 {
            return c(0.0);
        }
        let split = even_odd_split(a, b, cc, d);
        if n % 4 == 0 {
            let odd_high = [a, b, cc, d].iter().filter(|&&j| j % 2 == 1 && 2 * j > n).count() % 2 == 1;
            if odd_high || split {
                c(prefactor(a, b, cc, d) * special)
            } else {
                c(regular)
            }
        } else if split {
            c(prefactor(a, b, cc, d) * special)
        } else if [a, b, cc, d].iter().all(|j| j % 2 == 0) || [a, b, cc, d].iter().all(|j| j % 2 == 1) {
            c(regular)
        } else {
            c(1.0 / nf.sqrt())
        }
    }))
}

/// Qutrit view of a 9-level label: j = 3·j₁ + j₂.
#[inline]
pub fn qutrits(j: usize) -> (usize, usize) {
    (j / 3, j % 3)
}

/// a₁ + a₂ + b₁ + b₂
pub fn qutrit_charge(a: usize, b: usize) -> usize {
    let (a1, a2) = qutrits(a);
    let (b1, b2) = qutrits(b);
    a1 + a2 + b1 + b2
}

/// a₁ + 2a₂ + 3b₁ + 4b₂
pub fn qutrit_dipole(a: usize, b: usize) -> usize {
    let (a1, a2) = qutrits(a);
    let (b1, b2) = qutrits(b);
    a1 + 2 * a2 + 3 * b1 + 4 * b2
}

fn z9(a: usize, b: usize, cc: usize, d: usize) -> bool {
    (a + b + 18 - cc - d) % 9 == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DipoleCounts {
    /// outputs with equal charge
    pub n0: usize,
    /// outputs with equal charge and dipole
    pub n1: usize,
    /// outputs with equal charge obeying the Z_9 branching rule
    pub nz9: usize,
}

/// Counts by enumerating all 3⁴ outputs of the input (a, b).
pub fn dipole_counts(a: usize, b: usize) -> DipoleCounts {
    let (q, p) = (qutrit_charge(a, b), qutrit_dipole(a, b));
    let mut k = DipoleCounts { n0: 0, n1: 0, nz9: 0 };
    for cc in 0..9 {
        for d in 0..9 {
            if qutrit_charge(cc, d) != q {
                continue;
            }
            k.n0 += 1;
            if qutrit_dipole(cc, d) == p {
                k.n1 += 1;
            }
            if z9(a, b, cc, d) {
                k.nz9 += 1;
            }
        }
    }
    k
}

pub fn fixed_point_wq() -> WSingleLine {
    WSingleLine::from_fn(9, |a, b, cc, d| {
        if qutrit_charge(a, b) == qutrit_charge(cc, d) {
            c(1.0 / (dipole_counts(a, b).n0 as f64).sqrt())
        } else {
            c(0.0)
        }
    })
}

pub fn fixed_point_wp() -> WSingleLine {
    WSingleLine::from_fn(9, |a, b, cc, d| {
        if qutrit_charge(a, b) == qutrit_charge(cc, d) && qutrit_dipole(a, b) == qutrit_dipole(cc, d) {
            c(1.0 / (dipole_counts(a, b).n1 as f64).sqrt())
        } else {
            c(0.0)
        }
    })
}

/// The three segments Z_9 → W¹(0) = W²(0), W²(1) = W^Q = W³(0), W³(1) = W^P.
pub fn dipole_path_segment(seg: u8, g: f64) -> Result<WSingleLine> {
    check_range(g, (0.0, 1.0))?;
    let counts: Vec<DipoleCounts> = (0..81).map(|r| dipole_counts(r / 9, r % 9)).collect();
    let w = match seg {
        1 => WSingleLine::from_fn(9, |a, b, cc, d| {
            let k = counts[a * 9 + b];
            let denom = k.nz9 as f64 + (9 - k.nz9) as f64 * g;
            let charge = qutrit_charge(a, b) == qutrit_charge(cc, d);
            match (z9(a, b, cc, d), charge) {
                (true, true) => c(1.0 / denom.sqrt()),
                (true, false) => c((g / denom).sqrt()),
                _ => c(0.0),
            }
        }),
        2 => WSingleLine::from_fn(9, |a, b, cc, d| {
            let k = counts[a * 9 + b];
            let denom = k.nz9 as f64 + (k.n0 - k.nz9) as f64 * g;
            let charge = qutrit_charge(a, b) == qutrit_charge(cc, d);
            match (z9(a, b, cc, d), charge) {
                (true, true) => c(1.0 / denom.sqrt()),
                (false, true) => c((g / denom).sqrt()),
                _ => c(0.0),
            }
        }),
        3 => {
            // Written in terms of h = 1 − g so that g = 0 is W^Q and g = 1 is W^P.
            let h = 1.0 - g;
            WSingleLine::from_fn(9, |a, b, cc, d| {
                let k = counts[a * 9 + b];
                let denom = k.n1 as f64 + (k.n0 - k.n1) as f64 * h;
                let charge = qutrit_charge(a, b) == qutrit_charge(cc, d);
                let dipole = qutrit_dipole(a, b) == qutrit_dipole(cc, d);
                match (dipole, charge) {
                    (true, true) => c(1.0 / denom.sqrt()),
                    (false, true) => c((h / denom).sqrt()),
                    _ => c(0.0),
                }
            })
        }
        _ => return Err(Error::InvalidArgument(format!("dipole segment {seg} does not exist"))),
    };
    Ok(w)
}

/// Local quantities conserved by critical automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConservedQuantity {
    /// q = σ − ρ on Z_2 domain walls, as an integer.
    DomainWallDifference,
    /// q = a mod 2 + b mod 2
    LowBitCount,
    QutritCharge,
    QutritChargeAndDipole,
}

impl ConservedQuantity {
    fn value(self, a: usize, b: usize) -> (i64, i64) {
        match self {
            ConservedQuantity::DomainWallDifference => (a as i64 - b as i64, 0),
            ConservedQuantity::LowBitCount => ((a % 2 + b % 2) as i64, 0),
            ConservedQuantity::QutritCharge => (qutrit_charge(a, b) as i64, 0),
            ConservedQuantity::QutritChargeAndDipole => (qutrit_charge(a, b) as i64, qutrit_dipole(a, b) as i64),
        }
    }
}

/// Number of transitions with nonzero probability that change `q`.
pub fn conservation_violations(w: &WSingleLine, q: ConservedQuantity) -> usize {
    let n = w.modulus();
    let mut bad = 0;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    if w.get(a, b, cc, d).norm_sqr() > 0.0 && q.value(a, b) != q.value(cc, d) {
                        bad += 1;
                    }
                }
            }
        }
    }
    bad
}

/// Named single-line rules accepted on the command line.
pub fn named_rule(name: &str) -> Result<WSingleLine> {
    let upper = name.to_ascii_uppercase();
    match upper.as_str() {
        "WQ" => return Ok(fixed_point_wq()),
        "WP" => return Ok(fixed_point_wp()),
        "DS" => return crate::opcompile::reduce_double_to_single(&crate::tensors::double_semion_double_line()),
        _ => {}
    }
    if let Some(n) = upper.strip_prefix("TC").and_then(|s| s.parse::<usize>().ok()).filter(|n| *n >= 2) {
        return Ok(crate::tensors::toric_code_single_line(n));
    }
    if let Some(n) = upper.strip_prefix('Z').and_then(|s| s.strip_suffix('F')).and_then(|s| s.parse::<usize>().ok()) {
        return crate::tensors::frac_nontrivial_fixed_point(n);
    }
    if let Some(n) = upper.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()).filter(|n| *n >= 2) {
        return Ok(crate::tensors::toric_code_single_line(n));
    }
    Err(Error::Schema(format!("unknown rule {name:?} (expected WQ, WP, DS, TC<N>, Z<N>, Z<N>F)")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::{check_isometry, check_virtual_symmetry, double_semion_double_line, toric_code_double_line, toric_code_single_line};

    #[test]
    fn tc_ds_endpoints() {
        assert!(path_tc_ds(1.0).unwrap().max_abs_diff(&toric_code_double_line(2)) < 1e-15);
        assert!(path_tc_ds(-1.0).unwrap().max_abs_diff(&double_semion_double_line()) < 1e-15);
        let a0 = path_tc_ds(0.0).unwrap();
        for (i, j, k, l) in [(0, 0, 1, 1), (0, 1, 1, 0), (1, 1, 0, 0), (1, 0, 0, 1)] {
            assert_eq!(a0.get(i, j, k, l).norm(), 0.0);
        }
        assert!(a0.normalization_residual() < 1e-15);
    }

    #[test]
    fn z22_endpoints() {
        let w1 = path_z22_to_critical(1.0).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    for d in 0..4 {
                        let want = if c1(a, b, cc, d) == 0 && c2(a, b, cc, d) == 0 { 0.5 } else { 0.0 };
                        assert!((w1.get(a, b, cc, d).re - want).abs() < 1e-15);
                    }
                }
            }
        }
        assert!(path_z4_to_critical(1.0).unwrap().max_abs_diff(&toric_code_single_line(4)) < 1e-15);
        assert_eq!(path_z22_to_critical(0.0).unwrap().max_abs_diff(&path_z4_to_critical(0.0).unwrap()), 0.0);
        assert_eq!(path_z4_to_critical(1.0).unwrap().get(0, 1, 1, 0).re, 0.5);
    }

    #[test]
    fn set_frac_endpoints() {
        for n in [2, 4, 6, 8] {
            assert!(path_set_frac(1.0, n).unwrap().max_abs_diff(&toric_code_single_line(n)) < 1e-15, "N = {n}");
            let f = crate::tensors::frac_nontrivial_fixed_point(n).unwrap();
            assert!(path_set_frac(-1.0, n).unwrap().max_abs_diff(&f) < 1e-15, "N = {n}");
        }
        assert!(path_set_frac(0.5, 3).is_err());
    }

    #[test]
    fn set_frac_zeros_at_critical_point() {
        let w = path_set_frac(0.0, 4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    for d in 0..4 {
                        let odd_high = [a, b, cc, d].iter().filter(|&&j| j % 2 == 1 && j > 2).count() % 2 == 1;
                        if (a + b + 8 - cc - d) % 4 == 0 && (odd_high || even_odd_split(a, b, cc, d)) {
                            assert_eq!(w.get(a, b, cc, d).norm(), 0.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dipole_counts_and_endpoints() {
        assert_eq!(dipole_counts(0, 0).n0, 1);
        let wq = fixed_point_wq();
        assert_eq!(wq.get(0, 0, 0, 0).re, 1.0);
        assert!(dipole_path_segment(1, 1.0).unwrap().max_abs_diff(&toric_code_single_line(9)) < 1e-15);
        assert_eq!(dipole_path_segment(1, 0.0).unwrap().max_abs_diff(&dipole_path_segment(2, 0.0).unwrap()), 0.0);
        assert!(dipole_path_segment(2, 1.0).unwrap().max_abs_diff(&wq) < 1e-15);
        assert!(dipole_path_segment(3, 0.0).unwrap().max_abs_diff(&wq) < 1e-15);
        assert!(dipole_path_segment(3, 1.0).unwrap().max_abs_diff(&fixed_point_wp()) < 1e-15);
        assert!(fixed_point_wp().normalization_residual() < 1e-14);
        assert!(dipole_path_segment(4, 0.5).is_err());
    }

    #[test]
    fn every_family_is_isometric_on_its_grid() {
        for name in PathName::ALL {
            let spec = PathSpec::new(name, None).unwrap();
            for g in spec.grid(21) {
                let r = check_isometry(&spec.evaluate(g).unwrap());
                assert!(r.max_residual < 1e-12, "{name} g = {g}: {}", r.max_residual);
            }
        }
    }

    #[test]
    fn declared_symmetries_hold() {
        for name in PathName::ALL {
            let spec = PathSpec::new(name, None).unwrap();
            for g in spec.grid(21) {
                let t = spec.evaluate(g).unwrap();
                for s in spec.declared_symmetries(g) {
                    let r = check_virtual_symmetry(&t, s).unwrap();
                    assert!(r.holds, "{name} g = {g} {s:?}: {}", r.max_residual);
                }
            }
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(path_tc_ds(1.5), Err(Error::ParameterRange { .. })));
        assert!(path_z22_to_critical(-0.1).is_err());
        assert!(dipole_path_segment(2, 1.1).is_err());
        assert!(PathSpec::new(PathName::TcDs, Some(3)).is_err());
    }

    #[test]
    fn names_roundtrip() {
        for p in PathName::ALL {
            assert_eq!(p.as_str().parse::<PathName>().unwrap(), p);
        }
        assert!("nope".parse::<PathName>().is_err());
    }

    #[test]
    fn named_rules() {
        assert_eq!(named_rule("TC4").unwrap(), toric_code_single_line(4));
        assert_eq!(named_rule("Z9").unwrap(), toric_code_single_line(9));
        assert_eq!(named_rule("WP").unwrap(), fixed_point_wp());
        assert!(named_rule("Z4F").unwrap().get(0, 0, 1, 3).re < 0.0);
        assert!(named_rule("bogus").is_err());
    }

    #[test]
    fn critical_rules_conserve_their_charges() {
        let reduced = PathSpec::new(PathName::TcDs, None).unwrap().rule_tensor(0.0).unwrap();
        assert_eq!(conservation_violations(&reduced, ConservedQuantity::DomainWallDifference), 0);
        assert_eq!(conservation_violations(&path_z22_to_critical(0.0).unwrap(), ConservedQuantity::LowBitCount), 0);
        assert_eq!(conservation_violations(&path_set_frac(0.0, 4).unwrap(), ConservedQuantity::LowBitCount), 0);
        assert_eq!(conservation_violations(&fixed_point_wq(), ConservedQuantity::QutritCharge), 0);
        assert_eq!(conservation_violations(&fixed_point_wp(), ConservedQuantity::QutritChargeAndDipole), 0);
        // Away from criticality the same tables do have violating transitions.
        let reduced = PathSpec::new(PathName::TcDs, None).unwrap().rule_tensor(0.5).unwrap();
        assert!(conservation_violations(&reduced, ConservedQuantity::DomainWallDifference) > 0);
        assert!(conservation_violations(&path_z22_to_critical(0.5).unwrap(), ConservedQuantity::LowBitCount) > 0);
        assert!(conservation_violations(&fixed_point_wq(), ConservedQuantity::QutritChargeAndDipole) > 0);
    }
}
